from fdalign.verification.gradient_suite import (
    GradientSuite,
    GradientSuiteReport,
    run_gradient_suite,
    tiny_model_config,
)

__all__ = [GradientSuite, GradientSuiteReport, run_gradient_suite, tiny_model_config]
