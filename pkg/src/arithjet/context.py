"""Arithmetic context: the odd prime p, p-adic precision N, series degree M.

One Context is threaded through every computation.  The base ring is
R = Z_p with uniformizer p, residue field F_p, and the Frobenius lift on
scalars is the identity, so q = p throughout.
"""

from dataclasses import dataclass, replace

from .errors import ArithJetError


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Context:
    """p-adic working context.

    p: odd prime; N: number of tracked p-adic digits; M: total-degree
    truncation bound for power series.
    """

    p: int
    N: int = 8
    M: int = 12

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ArithJetError(f"p = {self.p} is not prime")
        if self.p < 3:
            raise ArithJetError("p must be an odd prime (p >= 3)")
        if self.N < 2:
            raise ArithJetError("precision N must be >= 2")
        if self.M < 1:
            raise ArithJetError("degree bound M must be >= 1")

    def with_degree(self, M: int) -> "Context":
        return replace(self, M=M)

    def with_precision(self, N: int) -> "Context":
        return replace(self, N=N)

    def pk(self, k: int) -> int:
        """p^k (k >= 0)."""
        return self.p ** k
