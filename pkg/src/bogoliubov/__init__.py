"""Constructive Bogoliubov diagonalization of bosonic quadratic Hamiltonians.

Given a positive one-body operator ``h`` and a symmetric pairing matrix ``K``
with ``||h^{-1/2} conj(K) conj(h^{-1/2})|| < 1``, :func:`bosonic_diagonalize`
returns a Bogoliubov map ``V`` and the excitation operator ``xi`` together
with numerical certificates for every identity and bound the construction
satisfies. Two independent oracles are shipped alongside: the closed form for
commuting ``h`` and ``K`` and exact diagonalization on a truncated Fock space.
"""

from .diagonalizer import (
    CertificateBundle,
    DiagonalizationResult,
    bosonic_diagonalize,
    certify,
    fermionic_block_diagonalize,
    signed_block,
)
from .errors import (
    BogoliubovError,
    GapViolation,
    InvalidParams,
    NotSymmetricPairing,
    SchemaError,
    TruncationUnreliable,
)
from .generate import generate
from .io import ProblemFile, read_problem_file, write_problem_file
from .linalg import ComplexSymmetricMatrix, HermitianMatrix, hermitian_function, takagi_factorize
from .nambu import (
    BogoliubovMap,
    Problem,
    assemble_block_hamiltonian,
    gram_pairing,
    validate_bogoliubov,
    validate_problem,
)
from .oracle import CommutativeInstance, commutative_diagonalize

__all__ = [
    "BogoliubovError",
    "BogoliubovMap",
    "CertificateBundle",
    "CommutativeInstance",
    "ComplexSymmetricMatrix",
    "DiagonalizationResult",
    "GapViolation",
    "HermitianMatrix",
    "InvalidParams",
    "NotSymmetricPairing",
    "Problem",
    "ProblemFile",
    "SchemaError",
    "TruncationUnreliable",
    "assemble_block_hamiltonian",
    "bosonic_diagonalize",
    "certify",
    "commutative_diagonalize",
    "fermionic_block_diagonalize",
    "generate",
    "gram_pairing",
    "hermitian_function",
    "read_problem_file",
    "signed_block",
    "takagi_factorize",
    "validate_bogoliubov",
    "validate_problem",
    "write_problem_file",
]
