"""Unit tests for the loguru setup."""

from loguru import logger

from qcs.config.settings import LoggingConfig
from qcs.utils import logs


class TestConfigureLogging:
    """Test sink installation."""

    def teardown_method(self):
        logger.remove()

    def test_file_sink_receives_records(self, tmp_path):
        path = tmp_path / "qcs.log"
        logs.configure_logging(LoggingConfig(level="INFO", file=str(path), format="{level} {message}"))
        logger.info("designed quantizer")
        logger.debug("hidden")
        logger.remove()
        text = path.read_text()
        assert "INFO designed quantizer" in text
        assert "hidden" not in text
        assert logs.is_configured()

    def test_debug_forces_level(self, tmp_path):
        path = tmp_path / "qcs.log"
        logs.configure_logging(LoggingConfig(level="WARNING", file=str(path), format="{message}"), debug=True)
        logger.debug("visible")
        logger.remove()
        assert "visible" in path.read_text()
