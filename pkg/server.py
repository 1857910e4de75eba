"""Quantized CS MCP Server.

Modular implementation with tools organized by functionality.
"""

from typing import Dict

from mcp.server.fastmcp import FastMCP

from qcs import __version__
from qcs.context import app_lifespan
from qcs.tools.quantizers import register_quantizer_tools
from qcs.tools.reconstruction import register_reconstruction_tools
from qcs.tools.bounds import register_bound_tools
from qcs.tools.experiments import register_experiment_tools


# Create the MCP server
mcp = FastMCP("QCS", dependencies=[], lifespan=app_lifespan)


# Register all tool modules
register_quantizer_tools(mcp)
register_reconstruction_tools(mcp)
register_bound_tools(mcp)
register_experiment_tools(mcp)


# Add resource to provide information about available tools
@mcp.resource("info://qcs-tools")
def get_qcs_tools_info() -> Dict:
    """Get information about the available quantized CS tools."""
    tools_info = {
        "description": "Quantized compressive sensing tools",
        "version": __version__,
        "conventions": "Indices are 0-based; infinite cell bounds are returned as null",
        "categories": {
            "quantizers": [
                "design_scalar_quantizer",
                "quantize_measurements",
                "gaussian_cell_probabilities",
                "build_huffman_code",
                "design_vector_quantizer",
            ],
            "reconstruction": [
                "generate_instance",
                "matrix_statistics",
                "reconstruct_signal",
            ],
            "bounds": [
                "get_distortion_constants",
                "get_reconstruction_constants",
                "entropy_coded_step",
                "compare_vq_bounds",
                "get_bound_table",
            ],
            "experiments": [
                "run_monte_carlo",
                "clt_check",
                "theorem_check",
            ],
        },
    }
    return tools_info


def main():
    """Main entry point for the script."""
    # Stdio is prefered for local execution.
    mcp.run(transport="stdio")


# Main entry point
if __name__ == "__main__":
    main()
