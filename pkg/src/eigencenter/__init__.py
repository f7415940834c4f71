"""Eigenanalysis of centered versus non-centered Gram and covariance matrices."""

from .centering import (
    CenteringScheme,
    WeightVector,
    center_data,
    double_center,
    mean_vector,
)
from .core_linalg import EigenDecomposition, sym_eigen
from .datasets import Dataset, banana, iris, load_csv
from .kernels import GramMatrix, KernelSpec, gram_matrix, parse_kernel
from .spectral_analysis import SpectralReport, full_report

__version__ = "0.1.0"

__all__ = [
    "CenteringScheme",
    "Dataset",
    "EigenDecomposition",
    "GramMatrix",
    "KernelSpec",
    "SpectralReport",
    "WeightVector",
    "banana",
    "center_data",
    "double_center",
    "full_report",
    "gram_matrix",
    "iris",
    "load_csv",
    "mean_vector",
    "parse_kernel",
    "sym_eigen",
]
