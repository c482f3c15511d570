"""Exact workbench for finite-dimensional coalgebras and their products."""

from .fields import (
    Field,
    FieldDescriptor,
    FieldError,
    Embedding,
    GF,
    embed,
    find_embeddings,
    identity_embedding,
    make_field,
)
from .linalg import Matrix, Subspace, kronecker, scalar_extend_matrix, scalar_extend_subspace
from .budget import BudgetExceeded

__version__ = "0.1.0"
