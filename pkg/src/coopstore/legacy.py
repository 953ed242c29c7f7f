"""The two earlier cooperative-repair codes and their eavesdropping attacks.

Code A (k = t = 2, alpha = d = n - 2): node 1 stores a, node 2 stores b,
parity node i+2 stores a + D_i b for diagonal D_i built from powers of a
field generator.  Its repair transfers change with the repair group; an
eavesdropper on node 1's downloads collects, from a single parity node
across all groups, a full invertible system in (a, b) and recovers
everything.

Code B (d = k, alpha = t): same deployment as the stable code (M*G with a
Vandermonde G) but repair assigns helper packets to replacements by serial
order, so the packet a helper sends to a given node depends on which other
nodes failed.  Sliding the repair window leaks every row of M to one
observed node.

Both codes are modeled at the repair-functional level; Code A's
cooperative-exchange payload is undefined in its source and is not
simulated -- the attack instead receives node 1's content directly,
flagged as granted rows in reports.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .entropy import ObservationSet, entropy_symbols, observations
from .errors import (
    DimensionMismatch,
    FieldTooSmall,
    InadmissibleOmega,
    InvalidContext,
    InvalidGroup,
    NotGenerator,
    ParameterTooSmall,
    Singular,
    SingularLeakageMatrix,
)
from .matrix import Mat, vandermonde
from .stable import CodeParams, ShardVector


# --------------------------------------------------------------------------
# Code A
# --------------------------------------------------------------------------


def admissibility_value(field, omega: int, alpha: int) -> int:
    """(1 + w + ... + w^(alpha-1))^2 * w^-(alpha-1); must avoid {0, alpha^2}."""
    s = 0
    for e in range(alpha):
        s = field.add(s, field.pow(omega, e))
    val = field.mul(s, s)
    return field.mul(val, field.inv(field.pow(omega, alpha - 1)))


@dataclass(frozen=True)
class CodeAParams:
    field: object
    d: int
    omega: int

    @property
    def n(self):
        return self.d + 2

    @property
    def alpha(self):
        return self.d

    @property
    def B(self):
        return 2 * self.d

    def diag(self, i: int):
        """Diagonal of D_i: entry r is omega^((i-1+r) mod alpha), r from 0."""
        f = self.field
        return tuple(f.pow(self.omega, (i - 1 + r) % self.alpha) for r in range(self.alpha))


def code_a_init(d: int, field, omega: int) -> CodeAParams:
    """Validate (d, q, omega) for Code A; builds the diagonal family."""
    if d < 2:
        raise ParameterTooSmall("Code A needs d >= 2")
    n = d + 2
    if field.order <= n - 1:
        raise FieldTooSmall(f"need q > n - 1 = {n - 1}, got q = {field.order}")
    omega = field.element(omega)
    if omega == 0 or not field.is_generator(omega):
        raise NotGenerator(f"omega={omega} does not generate the multiplicative group")
    val = admissibility_value(field, omega, d)
    alpha_elem = _sum_ones(field, d)  # alpha = d in the field's characteristic
    alpha_sq = field.mul(alpha_elem, alpha_elem)
    if val == 0 or val == alpha_sq:
        raise InadmissibleOmega(
            f"admissibility value {val} lies in {{0, alpha^2={alpha_sq}}}", condition_value=val
        )
    return CodeAParams(field=field, d=d, omega=omega)


def _sum_ones(field, count: int) -> int:
    acc = 0
    for _ in range(count):
        acc = field.add(acc, 1)
    return acc


def code_a_encode(params: CodeAParams, a, b):
    """Shards: node 1 holds a, node 2 holds b, node i+2 holds a + D_i b."""
    alpha = params.alpha
    a, b = tuple(a), tuple(b)
    if len(a) != alpha or len(b) != alpha:
        raise DimensionMismatch(f"vectors must have length {alpha}")
    f = params.field
    shards = [ShardVector(1, a), ShardVector(2, b)]
    for i in range(1, params.d + 1):
        di = params.diag(i)
        shards.append(
            ShardVector(i + 2, tuple(f.add(x, f.mul(w, y)) for x, w, y in zip(a, di, b)))
        )
    return shards


def _row_a(params, a_coeffs, b_coeffs):
    return tuple(a_coeffs) + tuple(b_coeffs)


def code_a_repair_functionals(params: CodeAParams, group) -> ObservationSet:
    """Functionals of the repair data sent to node 1 under one group.

    group must be (1, l).  For (1, 2) each parity j sends z^T D_j^{-1} r_j.
    For (1, i+2) parity j != i sends z^T D_i D_j^{-1} r_j (the aligned
    combination) and node 2 sends z^T D_i b.
    """
    group = tuple(sorted(group))
    if len(group) != 2 or group[0] != 1 or not 2 <= group[1] <= params.n:
        raise InvalidGroup(f"only groups (1, l) are modeled, got {group}")
    f = params.field
    alpha = params.alpha
    other = group[1]
    rows = []
    if other == 2:
        # helpers: all d parity nodes
        for j in range(1, params.d + 1):
            dj_inv = [f.inv(v) for v in params.diag(j)]
            rows.append(
                (f"S_{j + 2}^1|C=1,2", _row_a(params, dj_inv, [1] * alpha))
            )
    else:
        i = other - 2
        di = params.diag(i)
        for j in range(1, params.d + 1):
            if j == i:
                continue
            dj_inv = [f.inv(v) for v in params.diag(j)]
            a_part = [f.mul(x, y) for x, y in zip(di, dj_inv)]
            rows.append(
                (f"S_{j + 2}^1|C=1,{other}", _row_a(params, a_part, di))
            )
        rows.append((f"S_2^1|C=1,{other}", _row_a(params, [0] * alpha, di)))
    return observations(f, params.B, rows)


def code_a_leakage_matrix(params: CodeAParams, j: int) -> Mat:
    """Columns [z, D_1 z, ..., D_{j-1} z, D_{j+1} z, ..., D_d z]."""
    alpha = params.alpha
    cols = [(1,) * alpha]
    for i in range(1, params.d + 1):
        if i != j:
            cols.append(params.diag(i))
    return Mat.from_rows(params.field, cols).transpose()


def code_a_inverse_leakage_matrix(params: CodeAParams, j: int) -> Mat:
    """Columns [z, D_1^{-1} z, ...(skip j)..., D_d^{-1} z]."""
    f = params.field
    alpha = params.alpha
    cols = [(1,) * alpha]
    for i in range(1, params.d + 1):
        if i != j:
            cols.append(tuple(f.inv(v) for v in params.diag(i)))
    return Mat.from_rows(params.field, cols).transpose()


@dataclass(frozen=True)
class CodeAAttackResult:
    recovered_a: tuple
    recovered_b: tuple
    leaked_entropy: int
    observations: ObservationSet
    parity_index: int


def code_a_attack(params: CodeAParams, a, b, j: int = 1) -> CodeAAttackResult:
    """Recover (a, b) from node 1's repair downloads across all groups.

    The eavesdropper keeps the d symbols parity node j+2 sends to node 1
    (one per repair group), solves the leakage system for D_j^{-1} a + b,
    and combines it with node 1's content a (granted: the downloads
    determine it, but the exchange payload is not modeled).
    """
    f = params.field
    alpha = params.alpha
    a, b = tuple(a), tuple(b)
    shards = code_a_encode(params, a, b)
    r_j = shards[j + 1].symbols  # node j+2

    def dot(u, v):
        acc = 0
        for x, y in zip(u, v):
            if x and y:
                acc = f.add(acc, f.mul(x, y))
        return acc

    dj_inv = [f.inv(v) for v in params.diag(j)]
    z_dj_inv_r = dot(dj_inv, r_j)  # group (1,2) symbol from parity j
    symbols = [z_dj_inv_r]
    for i in range(1, params.d + 1):
        if i == j:
            continue
        di = params.diag(i)
        symbols.append(dot([f.mul(x, y) for x, y in zip(di, dj_inv)], r_j))

    m17 = code_a_leakage_matrix(params, j)
    try:
        # symbols = v^T @ m17 with v = D_j^{-1} a + b
        v = m17.transpose().solve(Mat(params.field, alpha, 1, symbols)).col(0)
    except Singular as exc:
        raise SingularLeakageMatrix(
            f"leakage matrix for parity {j} is singular; omega inadmissible"
        ) from exc

    rec_b = tuple(f.sub(vi, f.mul(dji, ai)) for vi, dji, ai in zip(v, dj_inv, a))
    rec_a = a  # granted

    obs = code_a_full_observations(params)
    return CodeAAttackResult(
        recovered_a=rec_a,
        recovered_b=rec_b,
        leaked_entropy=entropy_symbols(obs),
        observations=obs,
        parity_index=j,
    )


def code_a_full_observations(params: CodeAParams) -> ObservationSet:
    """Everything node 1's observer sees across every group, plus granted a."""
    rows = []
    for ell in range(2, params.n + 1):
        sub = code_a_repair_functionals(params, (1, ell))
        rows.extend(zip(sub.labels, sub.rows))
    adapter = CodeAAdapter(params)
    rows.extend(adapter.granted_rows(1))
    return observations(params.field, params.B, rows)


class CodeAAdapter:
    """Functional protocol over the (a, b) message space, node-1 traversal only."""

    variant = "code-a"
    supported_failed_nodes = (1,)

    def __init__(self, params: CodeAParams):
        self.code_params = params
        self.field = params.field
        d = params.d
        self.params = CodeParams.mscr(n=params.n, k=2, d=d, t=2, q=params.field.order)

    def storage_rows(self, node: int):
        p = self.code_params
        alpha = p.alpha
        rows = []
        if node == 1:
            for r in range(alpha):
                row = [0] * p.B
                row[r] = 1
                rows.append((f"W_1[{r}]", tuple(row)))
        elif node == 2:
            for r in range(alpha):
                row = [0] * p.B
                row[alpha + r] = 1
                rows.append((f"W_2[{r}]", tuple(row)))
        else:
            di = p.diag(node - 2)
            for r in range(alpha):
                row = [0] * p.B
                row[r] = 1
                row[alpha + r] = di[r]
                rows.append((f"W_{node}[{r}]", tuple(row)))
        return rows

    def contexts(self, node: int):
        if node != 1:
            raise InvalidGroup("only node 1's repair traversal is modeled")
        p = self.code_params
        for ell in range(2, p.n + 1):
            group = (1, ell)
            helpers = tuple(i for i in range(2, p.n + 1) if i != ell)
            yield group, helpers

    def downloads_for_context(self, node: int, group, helpers):
        # exchange payload undefined in the source construction: repair only
        sub = code_a_repair_functionals(self.code_params, group)
        return list(zip(sub.labels, sub.rows))

    def granted_rows(self, node: int):
        if node != 1:
            return []
        return [(f"granted {label}", row) for label, row in self.storage_rows(1)]


# --------------------------------------------------------------------------
# Code B
# --------------------------------------------------------------------------


class CodeB:
    """Serial-order repair over the stable code's deployment (no G')."""

    variant = "code-b"

    def __init__(self, params: CodeParams, field, G: Mat):
        if params.d != params.k:
            raise InvalidContext("this family requires d = k")
        self.params = params
        self.field = field
        self.G = G
        self._g_cols = [G.col(j) for j in range(params.n)]

    @classmethod
    def create(cls, params: CodeParams, field) -> "CodeB":
        if field.order < params.n + 1:
            raise FieldTooSmall(f"need field order >= {params.n + 1}")
        return cls(params, field, vandermonde(field, range(1, params.n + 1), params.k))

    def encode(self, data: Mat):
        p = self.params
        if (data.nrows, data.ncols) != (p.t, p.k):
            raise DimensionMismatch(f"data matrix must be {p.t}x{p.k}")
        coded = data.mul(self.G)
        return [ShardVector(j + 1, coded.col(j)) for j in range(p.n)]

    # --- serial-order repair ---

    def packet_index(self, node: int, group) -> int:
        """Which stored packet helpers send to `node` under `group` (0-based)."""
        group = tuple(sorted(group))
        if node not in group:
            raise InvalidContext(f"{node} not in repair group {group}")
        return group.index(node)

    def validate_context(self, group, helpers):
        p = self.params
        group = tuple(sorted(group))
        helpers = tuple(sorted(helpers))
        if len(group) != p.t or len(set(group)) != p.t:
            raise InvalidContext(f"group must be {p.t} distinct nodes")
        if len(helpers) != p.k or len(set(helpers)) != p.k:
            raise InvalidContext(f"helper set must be {p.k} distinct nodes")
        if set(group) & set(helpers):
            raise InvalidContext("group and helpers must be disjoint")
        if not all(1 <= x <= p.n for x in group + helpers):
            raise InvalidContext("node id out of range")
        return group, helpers

    def repair(self, ctx_group, helpers, shards):
        """Original two-phase repair; regenerates the group exactly."""
        p = self.params
        group = tuple(sorted(ctx_group))
        helpers = tuple(sorted(helpers))
        f = self.field
        gsub = self.G.submatrix(range(p.k), [h - 1 for h in helpers])
        gsub_t_inv = gsub.transpose().inverse()
        solved = {}
        for fj in group:
            idx = self.packet_index(fj, group)
            received = tuple(shards[lam].symbols[idx] for lam in helpers)
            solved[fj] = gsub_t_inv.mul_vec(received)  # = m_idx
        out = []
        for fj in group:
            symbols = []
            gj = self._g_cols[fj - 1]
            for fi in group:
                m_row = solved[fi]
                acc = 0
                for a_, b_ in zip(m_row, gj):
                    if a_ and b_:
                        acc = f.add(acc, f.mul(a_, b_))
                symbols.append(acc)
            out.append(ShardVector(fj, tuple(symbols)))
        return out

    # --- functional protocol ---

    def storage_rows(self, node: int):
        p = self.params
        g = self._g_cols[node - 1]
        rows = []
        for i in range(p.t):
            row = [0] * p.B
            for c in range(p.k):
                row[i * p.k + c] = g[c]
            rows.append((f"W_{node}[{i}]", tuple(row)))
        return rows

    def contexts(self, node: int):
        p = self.params
        others = [i for i in range(1, p.n + 1) if i != node]
        for rest in itertools.combinations(others, p.t - 1):
            group = tuple(sorted((node,) + rest))
            pool = [i for i in range(1, p.n + 1) if i not in group]
            for helpers in itertools.combinations(pool, p.d):
                yield group, helpers

    def _packet_row(self, packet_idx: int, column_node: int):
        p = self.params
        g = self._g_cols[column_node - 1]
        row = [0] * p.B
        for c in range(p.k):
            row[packet_idx * p.k + c] = g[c]
        return tuple(row)

    def repair_row_ctx(self, helper: int, failed: int, group, helpers):
        idx = self.packet_index(failed, group)
        ctx = f"C={','.join(map(str, group))};D={','.join(map(str, helpers))}"
        return f"S_{helper}^{failed}|{ctx}", self._packet_row(idx, helper)

    def exchange_row_ctx(self, sender: int, receiver: int, group, helpers):
        idx = self.packet_index(sender, group)
        ctx = f"C={','.join(map(str, group))};D={','.join(map(str, helpers))}"
        return f"Z_{sender}^{receiver}|{ctx}", self._packet_row(idx, receiver)

    def nominal_context(self, node: int):
        """Lexicographically least context containing the node."""
        return next(self.contexts(node))

    def nominal_repair_row(self, helper: int, failed: int):
        group, _ = self.nominal_context(failed)
        idx = self.packet_index(failed, group)
        return self._packet_row(idx, helper)

    def nominal_exchange_row(self, sender: int, receiver: int):
        group = tuple(sorted((sender, receiver)))
        if self.params.t > 2:
            pool = [i for i in range(1, self.params.n + 1) if i not in group]
            group = tuple(sorted(group + tuple(pool[: self.params.t - 2])))
        idx = self.packet_index(sender, group)
        return self._packet_row(idx, receiver)

    def downloads_for_context(self, node: int, group, helpers):
        rows = [self.repair_row_ctx(lam, node, group, helpers) for lam in helpers]
        rows += [
            self.exchange_row_ctx(j, node, group, helpers) for j in group if j != node
        ]
        return rows

    def granted_rows(self, node: int):
        return []


def code_b_repair_data(code: CodeB, data: Mat, group, helpers):
    """Per-(helper, failed) transferred symbols under one serial-order context.

    Returns (symbols, functionals): symbols maps (helper, failed) to the
    transmitted field element; functionals is the labeled observation set of
    the same transfers over vec(M).
    """
    group, helpers = code.validate_context(group, helpers)
    shards = {s.node_id: s for s in code.encode(data)}
    symbols = {}
    rows = []
    for fj in group:
        idx = code.packet_index(fj, group)
        for lam in helpers:
            label, row = code.repair_row_ctx(lam, fj, group, helpers)
            symbols[(lam, fj)] = shards[lam].symbols[idx]
            rows.append((label, row))
    return symbols, observations(code.field, code.params.B, rows)


@dataclass(frozen=True)
class CodeBAttackResult:
    recovered: Mat
    leaked_entropy: int
    observations: ObservationSet
    groups: tuple
    helpers: tuple


def code_b_attack(code: CodeB, data: Mat) -> CodeBAttackResult:
    """Sliding-group traversal recovering all of M from one node's downloads.

    Groups [i, t-1+i] for i = 1..t are repaired in turn with helper set
    [2t, 2t+k-1]; node t's position inside the group slides, so it receives
    every packet row of M against an invertible k-column section of G.
    """
    p = code.params
    if p.n < 2 * p.t + p.k - 1:
        raise ParameterTooSmall(f"need n >= 2t + k - 1 = {2 * p.t + p.k - 1}, got {p.n}")
    helpers = tuple(range(2 * p.t, 2 * p.t + p.k))
    shards = {s.node_id: s for s in code.encode(data)}
    target = p.t
    rows = []
    symbols = {}
    groups = []
    for i in range(1, p.t + 1):
        group = tuple(range(i, p.t + i))
        groups.append(group)
        idx = code.packet_index(target, group)
        for lam in helpers:
            label, row = code.repair_row_ctx(lam, target, group, helpers)
            rows.append((label, row))
            symbols[(idx, lam)] = shards[lam].symbols[idx]
    obs = observations(code.field, p.B, rows)

    # packets x helpers table = M @ G[:, helpers]; invert the k x k section
    gsub = code.G.submatrix(range(p.k), [h - 1 for h in helpers])
    table = Mat.from_rows(
        code.field,
        [[symbols[(idx, lam)] for lam in helpers] for idx in range(p.t)],
    )
    recovered = gsub.transpose().solve(table.transpose()).transpose()
    return CodeBAttackResult(
        recovered=recovered,
        leaked_entropy=entropy_symbols(obs),
        observations=obs,
        groups=tuple(groups),
        helpers=helpers,
    )
