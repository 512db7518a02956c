"""Backend selection for the integer kernels.

The compiled module is used when it was built; otherwise the pure-Python
implementations are used. Both give identical, exact results.
"""

try:
    from ._ckernels import bilinear, is_isometry, matmul, matvec

    BACKEND = "compiled"
except ImportError:  # extension not built
    from ._pykernels import bilinear, is_isometry, matmul, matvec

    BACKEND = "python"

__all__ = ["BACKEND", "bilinear", "is_isometry", "matmul", "matvec"]
