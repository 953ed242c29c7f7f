"""Rank-metric precoding that makes the stable code leak nothing.

A capacity-sized secret is padded with uniform randomness and mixed through
a Gabidulin (Moore-matrix) generator over the extension field F_{q^B}; the
mixed vector becomes the B data cells of the stable code, each cell one
extension symbol.  Storage-code coefficients live in the base field F_q and
act on cells coordinate-wise, so everything an eavesdropper sees expands to
F_q-linear functionals of the secret-plus-randomness coordinates.  Secrecy
is then an exact rank fact checked per instance: the observed rows must be
coverable by the randomness (and, for zero mutual information, independent
of the secret block).

The tower F_{(2^4)^6} is fixed by the published reduction polynomial
y^6 + y^3 + (x^3 + 1) over GF(16), with GF(16) = GF(2)[x]/(x^4 + x + 1).
"""

from __future__ import annotations

from dataclasses import dataclass

from .entropy import (
    ObservationSet,
    conditional_entropy,
    entropy_symbols,
    mutual_information,
    observations,
)
from .errors import (
    FieldKindUnsupported,
    LengthMismatch,
    NotCoveredRegime,
)
from .eve import NOT_COVERED, EveModel, leakage_observations, predicted_secrecy_capacity
from .field import ExtensionField
from .matrix import Mat, moore_matrix
from .stable import CodeParams, StableCode

# (base order, extension degree) -> reduction polynomial, low degree first
PUBLISHED_TOWERS = {
    (16, 6): (9, 0, 0, 1, 0, 0, 1),  # y^6 + y^3 + (x^3+1)
}


@dataclass(frozen=True)
class SecureScheme:
    code: StableCode  # the symbol-field code (functional/analysis layer)
    code_ext: StableCode  # same code lifted to the extension field (data layer)
    ext: ExtensionField
    gabidulin: Mat  # B x B Moore generator over ext
    secret_len: int
    random_len: int
    l1: int
    l2: int

    @property
    def B(self):
        return self.code.params.B


def scheme_create(code: StableCode, l1: int, l2: int) -> SecureScheme:
    """Size the secret from the closed-form capacity and build the mixer."""
    if code.field.kind != "binary":
        raise FieldKindUnsupported("secure mode runs over GF(2^m) symbol fields")
    p = code.params
    capacity = predicted_secrecy_capacity(p, l1, l2)
    if capacity is NOT_COVERED:
        raise NotCoveredRegime(f"no closed-form capacity for (l1={l1}, l2={l2})")
    if capacity == 0:
        raise NotCoveredRegime(f"capacity is 0 at (l1={l1}, l2={l2}); nothing to store")
    key = (code.field.order, p.B)
    if key not in PUBLISHED_TOWERS:
        raise FieldKindUnsupported(f"no published tower for q={key[0]}, degree={key[1]}")
    ext = ExtensionField(code.field, p.B, PUBLISHED_TOWERS[key])
    basis = [ext.from_coords([1 if s == i else 0 for s in range(p.B)]) for i in range(p.B)]
    gab = moore_matrix(ext, basis, p.B, code.field.order)
    ext_params = CodeParams.mscr(n=p.n, k=p.k, d=p.d, t=p.t, q=ext.order, beta=p.beta)
    code_ext = StableCode.create(ext_params, ext)
    return SecureScheme(
        code=code,
        code_ext=code_ext,
        ext=ext,
        gabidulin=gab,
        secret_len=capacity,
        random_len=p.B - capacity,
        l1=l1,
        l2=l2,
    )


def random_symbols(scheme: SecureScheme, rng, count: int):
    return tuple(rng.randrange(scheme.ext.order) for _ in range(count))


def precode(scheme: SecureScheme, secret, randomness):
    """Mix (secret || randomness) through the Moore generator -> B cells."""
    secret, randomness = tuple(secret), tuple(randomness)
    if len(secret) != scheme.secret_len:
        raise LengthMismatch(f"secret must be {scheme.secret_len} extension symbols")
    if len(randomness) != scheme.random_len:
        raise LengthMismatch(f"randomness must be {scheme.random_len} extension symbols")
    u = Mat(scheme.ext, 1, scheme.B, secret + randomness)
    return u.mul(scheme.gabidulin).row(0)


def cells_to_data(scheme: SecureScheme, cells) -> Mat:
    """Lay the B cells out as the t x k data matrix (row-major)."""
    p = scheme.code.params
    return Mat(scheme.ext, p.t, p.k, cells)


def encode_secure(scheme: SecureScheme, secret, randomness):
    """Full pipeline: mix, shape, and encode into n extension-symbol shards."""
    cells = precode(scheme, secret, randomness)
    return scheme.code_ext.encode(cells_to_data(scheme, cells))


def decode_secret(scheme: SecureScheme, shards):
    """Reconstruct from any k shards and unmix; the randomness is discarded."""
    data = scheme.code_ext.reconstruct(shards)
    cells = tuple(data.data)
    u = (
        scheme.gabidulin.transpose()
        .solve(Mat(scheme.ext, scheme.B, 1, cells))
        .col(0)
    )
    return u[: scheme.secret_len]


# ---------------------------------------------------------------------------
# Secrecy verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SecrecyCheck:
    eve: EveModel
    observed_rank: int
    randomness_entropy: int
    coverable: bool  # H(e) <= H(r)
    randomness_determined: bool  # H(r | secret, e) == 0
    mutual_information: int

    @property
    def passed(self):
        return self.mutual_information == 0


def _coordinate_rows(scheme: SecureScheme, cell_rows):
    """Expand cell-functionals (over F_q) to rows over the u-coordinates.

    A cell row lam observes sum_j lam_j c_j with c = u @ Gab, which equals
    u . (Gab @ lam^T).  Splitting each extension symbol u_i into B base
    coordinates turns one observed symbol into B base-field rows of length
    B * B.
    """
    ext = scheme.ext
    b = scheme.B
    basis = [ext.from_coords([1 if s == i else 0 for s in range(b)]) for i in range(b)]
    out = []
    for lam in cell_rows:
        w = [0] * b
        for i in range(b):
            acc = 0
            for j, coef in enumerate(lam):
                if coef:
                    acc = ext.add(acc, ext.scale(coef, scheme.gabidulin.at(i, j)))
            w[i] = acc
        # sigma = sum_i u_i w_i; coordinate t of sigma is linear in u_{i,s}
        cols = {}
        for i in range(b):
            if not w[i]:
                continue
            for s in range(b):
                prod = ext.mul(basis[s], w[i])
                for t_out, coef in enumerate(ext.coords(prod)):
                    if coef:
                        cols.setdefault(t_out, {})[(i, s)] = coef
        for t_out in range(b):
            row = [0] * (b * b)
            for (i, s), coef in cols.get(t_out, {}).items():
                row[i * b + s] = coef
            out.append(tuple(row))
    return out


def _selector_rows(scheme: SecureScheme, start: int, stop: int):
    b = scheme.B
    rows = []
    for i in range(start, stop):
        for s in range(b):
            row = [0] * (b * b)
            row[i * b + s] = 1
            rows.append((f"u_{i}[{s}]", tuple(row)))
    return rows


def verify_secrecy(scheme: SecureScheme, eve: EveModel) -> SecrecyCheck:
    """Exact rank verification that the eavesdropper learns nothing.

    The pass condition is zero mutual information between secret
    coordinates and observed rows; the two sufficient conditions (coverage
    by randomness and randomness determined given secret and observations)
    are reported as diagnostics.
    """
    base = scheme.code.field
    b = scheme.B
    cell_obs = leakage_observations(scheme.code, eve)
    coord_rows = _coordinate_rows(scheme, cell_obs.unique_rows())
    e_obs = observations(
        base, b * b, [(f"e[{i}]", r) for i, r in enumerate(coord_rows)]
    )
    s_obs = observations(base, b * b, _selector_rows(scheme, 0, scheme.secret_len))
    r_obs = observations(base, b * b, _selector_rows(scheme, scheme.secret_len, b))

    h_e = entropy_symbols(e_obs)
    h_r = entropy_symbols(r_obs)
    coverable = h_e <= h_r
    determined = conditional_entropy(r_obs, s_obs.concat(e_obs)) == 0
    mi = mutual_information(s_obs, e_obs)
    return SecrecyCheck(
        eve=eve,
        observed_rank=h_e,
        randomness_entropy=h_r,
        coverable=coverable,
        randomness_determined=determined,
        mutual_information=mi,
    )


def verify_secrecy_sweep(scheme: SecureScheme):
    """verify_secrecy over every (E, F) placement at the scheme's (l1, l2)."""
    import itertools

    p = scheme.code.params
    nodes = range(1, p.n + 1)
    checks = []
    for f_set in itertools.combinations(nodes, scheme.l2):
        rest = [x for x in nodes if x not in f_set]
        for e_set in itertools.combinations(rest, scheme.l1):
            checks.append(verify_secrecy(scheme, EveModel(E=e_set, F=f_set)))
    return checks
