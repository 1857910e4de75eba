"""Monte Carlo experiments, numerical checks, and CSV reports."""

from .experiment import (
    DesignedQuantizer,
    MODIFIED_ALGORITHMS,
    STANDARD_ALGORITHMS,
    TrialRecord,
    design_quantizers,
    entropy_coded_design,
    run_experiment,
    run_trial,
    training_samples,
)
from .report import Summary, emit_csv, emit_fig_data, summarize
from .checks import (
    CLTCheck,
    MatrixQuantizationCheck,
    MismatchCheck,
    SandwichCheck,
    Theorem1Row,
    Theorem3Row,
    as_rows,
    matrix_quantization_check,
    mismatch_check,
    reconstruction_sandwich,
    theorem1_check,
    theorem3_check,
    verify_clt,
)

__all__ = [
    'DesignedQuantizer',
    'MODIFIED_ALGORITHMS',
    'STANDARD_ALGORITHMS',
    'TrialRecord',
    'design_quantizers',
    'entropy_coded_design',
    'run_experiment',
    'run_trial',
    'training_samples',
    'Summary',
    'emit_csv',
    'emit_fig_data',
    'summarize',
    'CLTCheck',
    'MatrixQuantizationCheck',
    'MismatchCheck',
    'SandwichCheck',
    'Theorem1Row',
    'Theorem3Row',
    'as_rows',
    'matrix_quantization_check',
    'mismatch_check',
    'reconstruction_sandwich',
    'theorem1_check',
    'theorem3_check',
    'verify_clt',
]
