"""gvlab: a numerical verification lab for Gruss and Gruss-Voronovskaya
estimates of Bernstein-type operators, real and complex, including
Bernstein-Faber operators on concrete continua."""

from . import complex_ops, faber, funcs, harness, moduli, real_ops

__version__ = "0.1.0"

__all__ = ["funcs", "moduli", "real_ops", "complex_ops", "faber", "harness", "__version__"]
