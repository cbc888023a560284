"""Linear algebra over Z/p^K: kernel lattices, Smith exponents, small solves.

Everything here works with plain Python ints (entries are residues mod
p^K) except ``solve_padic``, which eliminates over PadicRational rows for
honest per-entry precision in the tiny systems the character module
solves.

The central object is the kernel lattice {u in Z_p^n : B u = 0 mod p^m}
for an integer matrix B known mod p^K (K >= m).  It always contains
p^m Z_p^n; its Smith exponents against Z_p^n separate genuine solutions
(small exponent) from budget-forced ones (exponent near m).
"""

from .padic import PadicRational, vp
from .errors import ArithJetError, PrecisionExhausted

_INF = float("inf")


def _vp_mod(x: int, p: int, K: int):
    x %= p ** K
    if x == 0:
        return None  # valuation >= K
    return vp(x, p)


def kernel_lattice(rows, ncols: int, p: int, m: int, K: int):
    """Basis of {u : row . u = 0 mod p^m for every row}, entries mod p^K.

    Processes constraints incrementally: maintain a column basis B of the
    current solution lattice (starting at the identity); for each row,
    shear the basis against the minimum-valuation image value and scale
    the pivot column by the p-power still needed.  Returns the basis as a
    list of ncols columns (ints), lattice = B * Z^n.
    """
    if K < m:
        raise ArithJetError("need K >= m to resolve the kernel")
    mod = p ** K
    basis = [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    # basis is a list of column vectors
    for row in rows:
        vals = []
        for col in basis:
            v = sum(r * c for r, c in zip(row, col)) % mod
            vals.append(v)
        # find pivot: minimum valuation below m
        piv, pivval = None, None
        for j, v in enumerate(vals):
            s = _vp_mod(v, p, K)
            if s is None or s >= m:
                continue
            if pivval is None or s < pivval:
                piv, pivval = j, s
        if piv is None:
            continue
        pv = vals[piv]
        pu = pv // p ** pivval
        pu_inv = pow(pu, -1, p ** (K - pivval))
        for j in range(ncols):
            if j == piv:
                continue
            s = _vp_mod(vals[j], p, K)
            if s is None:
                continue
            f = ((vals[j] // p ** pivval) * pu_inv) % (p ** (K - pivval))
            if f:
                bj, bp = basis[j], basis[piv]
                basis[j] = [(a - f * b) % mod for a, b in zip(bj, bp)]
        basis[piv] = [(p ** (m - pivval) * a) % mod for a in basis[piv]]
    return basis


def lattice_exponents(basis_cols, p: int, K: int):
    """Smith exponents of the lattice spanned by the columns against Z^n,
    by global-minimum-valuation column reduction (column ops preserve the
    lattice).  Returns a list of (exponent, column) with columns reduced,
    sorted by exponent."""
    cols = [list(c) for c in basis_cols]
    nrows = len(cols[0]) if cols else 0
    done_rows: set[int] = set()
    out = []
    remaining = list(range(len(cols)))
    while remaining:
        best = None  # (val, col_index, row_index)
        for j in remaining:
            for r in range(nrows):
                if r in done_rows:
                    continue
                s = _vp_mod(cols[j][r], p, K)
                if s is None:
                    continue
                if best is None or s < best[0]:
                    best = (s, j, r)
        if best is None:
            # columns vanish mod p^K on all remaining rows
            for j in remaining:
                out.append((K, cols[j]))
            break
        s, jp, rp = best
        pivcol = cols[jp]
        pu = pivcol[rp] // p ** s
        pu_inv = pow(pu, -1, p ** (K - s))
        for j in remaining:
            if j == jp:
                continue
            v = cols[j][rp] % p ** K
            if v == 0:
                continue
            f = ((v // p ** s) * pu_inv) % (p ** (K - s))
            if f:
                cols[j] = [(a - f * b) % p ** K for a, b in zip(cols[j], pivcol)]
        out.append((s, pivcol))
        done_rows.add(rp)
        remaining.remove(jp)
    out.sort(key=lambda t: t[0])
    return out


def solve_padic(columns, target):
    """Least-residual solve of sum_j x_j * columns[j] = target over Q_p.

    columns: list of lists of PadicRational (equal length); target: list
    of PadicRational.  Returns (xs, residual_valuation) where xs are the
    PadicRational coefficients from valuation-pivoted Gauss-Jordan
    elimination and residual_valuation is the minimum valuation of the
    remaining mismatch (inf if it vanishes at working precision).
    """
    k = len(columns)
    nrows = len(target)
    rows = [[col[i] for col in columns] + [target[i]] for i in range(nrows)]
    piv_rows: list[int] = []
    for j in range(k):
        best, bestval = None, None
        for i in range(nrows):
            if i in piv_rows:
                continue
            e = rows[i][j]
            if e.is_zero():
                continue
            if bestval is None or e.valuation() < bestval:
                best, bestval = i, e.valuation()
        if best is None:
            raise PrecisionExhausted(f"column {j} vanishes at working precision")
        piv_rows.append(best)
        pr = rows[best]
        inv = pr[j].inverse()
        pr = [e * inv for e in pr]
        rows[best] = pr
        for i in range(nrows):
            if i == best:
                continue
            f = rows[i][j]
            if f.is_zero():
                continue
            rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
    xs = [rows[piv_rows[j]][-1] for j in range(k)]
    resid = _INF
    for i in range(nrows):
        if i in piv_rows:
            continue
        e = rows[i][-1]
        if not e.is_zero():
            resid = min(resid, e.valuation())
    return xs, resid


def residual_only(columns, target):
    """Residual valuation of the best solve, discarding the coefficients."""
    _, resid = solve_padic(columns, target)
    return resid
