"""The stable cooperative-repair code (d = k family) and its certificate.

Data is a t x k matrix M over GF(q); node j stores column j of M*G where G
is a k x n Vandermonde generator.  Repair of a group of t nodes runs in two
phases driven by a second t x n generator G' (systematic, every t x t
column submatrix invertible):

  phase 1  each helper l sends its stored column dotted with g'_f -- one
           symbol per failed node f, independent of who else failed or is
           helping (the stability property);
  phase 2  each replacement f forwards its solved combination against g_i
           to every other replacement i;
  phase 3  each replacement inverts the t x t submatrix of G' on the group
           and recovers its original column exactly.

Every transferred symbol is also exposed as a linear functional of vec(M)
(row-major, length B = k*t) so leakage can be measured as rank.  Code
objects are immutable after construction and all operations are pure given
their shard inputs, so instances are safe to share across threads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (
    DimensionMismatch,
    DuplicateNode,
    FieldTooSmall,
    InvalidContext,
    MissingShard,
    NonIntegralParams,
    SelfRepair,
    TooFewShards,
)
from .matrix import Mat, systematic_superregular, vandermonde


@dataclass(frozen=True)
class CodeParams:
    """Validated parameter tuple at the minimum-storage cooperative point."""

    n: int
    k: int
    d: int
    t: int
    alpha: int
    beta: int
    beta_prime: int
    B: int
    q: int

    def __post_init__(self):
        if min(self.n, self.k, self.d, self.t, self.q) < 1:
            raise NonIntegralParams("all parameters must be positive")
        if self.n < self.d + self.t:
            raise NonIntegralParams(f"need n >= d + t, got n={self.n}, d+t={self.d + self.t}")
        if self.d < self.k:
            raise NonIntegralParams("no such codes exist with d < k")
        if self.B % self.k or self.alpha != self.B // self.k:
            raise NonIntegralParams("storage per node must equal B/k")
        denom = self.k * (self.d - self.k + self.t)
        if self.B % denom:
            raise NonIntegralParams("B must be divisible by k(d-k+t)")
        if self.beta != self.B // denom or self.beta_prime != self.beta:
            raise NonIntegralParams("repair and exchange bandwidth must equal B/(k(d-k+t))")

    @staticmethod
    def mscr(n: int, k: int, d: int, t: int, q: int, beta: int = 1) -> "CodeParams":
        """Parameters from the free choices; B inferred from beta."""
        b = k * (d - k + t) * beta
        return CodeParams(
            n=n, k=k, d=d, t=t, alpha=b // k, beta=beta, beta_prime=beta, B=b, q=q
        )


@dataclass(frozen=True)
class ShardVector:
    """One node's stored symbols for a single generation."""

    node_id: int
    symbols: tuple

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))


@dataclass(frozen=True)
class RepairContext:
    """A repair group (the replaced nodes) plus the chosen helper set."""

    group: tuple
    helpers: tuple

    def __post_init__(self):
        object.__setattr__(self, "group", tuple(sorted(self.group)))
        object.__setattr__(self, "helpers", tuple(sorted(self.helpers)))


def repair_context(code, group, helpers=None) -> RepairContext:
    group = tuple(sorted(group))
    p = code.params
    if len(set(group)) != len(group) or len(group) != p.t:
        raise InvalidContext(f"repair group must be {p.t} distinct nodes")
    if not all(1 <= g <= p.n for g in group):
        raise InvalidContext("group node id out of range")
    if helpers is None:
        helpers = [i for i in range(1, p.n + 1) if i not in group][: p.d]
    helpers = tuple(sorted(helpers))
    if len(set(helpers)) != len(helpers) or len(helpers) != p.d:
        raise InvalidContext(f"helper set must be {p.d} distinct nodes")
    if not all(1 <= h <= p.n for h in helpers):
        raise InvalidContext("helper node id out of range")
    if set(group) & set(helpers):
        raise InvalidContext("repair group and helper set must be disjoint")
    return RepairContext(group, helpers)


class StableCode:
    """Instantiated code: params + field + the two generator matrices."""

    variant = "stable"

    def __init__(self, params: CodeParams, field, G: Mat, Gp: Mat):
        if params.d != params.k:
            raise NonIntegralParams("this construction requires d = k")
        if params.beta != 1:
            raise NonIntegralParams("scalar construction: beta must be 1")
        if field.order != params.q:
            raise DimensionMismatch("field order does not match params.q")
        self.params = params
        self.field = field
        self.G = G
        self.Gp = Gp
        self._g_cols = [G.col(j) for j in range(params.n)]
        self._gp_cols = [Gp.col(j) for j in range(params.n)]

    @classmethod
    def create(cls, params: CodeParams, field) -> "StableCode":
        n, k, t = params.n, params.k, params.t
        if field.order < n + 1:
            raise FieldTooSmall(
                f"need field order >= {n + 1} for n={n} nonzero evaluation points"
            )
        g = vandermonde(field, range(1, n + 1), k)
        gp = systematic_superregular(field, t, n)
        return cls(params, field, g, gp)

    # ---- encode / reconstruct -------------------------------------------

    def encode(self, data: Mat):
        """n shards; shard j holds column j of data @ G."""
        p = self.params
        if (data.nrows, data.ncols) != (p.t, p.k):
            raise DimensionMismatch(f"data matrix must be {p.t}x{p.k}")
        if data.field != self.field:
            raise DimensionMismatch("data matrix over the wrong field")
        coded = data.mul(self.G)
        return [ShardVector(j + 1, coded.col(j)) for j in range(p.n)]

    def reconstruct(self, shards) -> Mat:
        """Recover the t x k data matrix from any k shards."""
        p = self.params
        shards = sorted(shards, key=lambda s: s.node_id)
        ids = [s.node_id for s in shards]
        if len(set(ids)) != len(ids):
            raise DuplicateNode(f"duplicate node ids in {ids}")
        if len(shards) < p.k:
            raise TooFewShards(f"need {p.k} shards, got {len(shards)}")
        take = shards[: p.k]
        gsub = self.G.submatrix(range(p.k), [s.node_id - 1 for s in take])
        stored = Mat.from_rows(self.field, [s.symbols for s in take]).transpose()
        # stored = M @ gsub, columns in node order
        return gsub.transpose().solve(stored.transpose()).transpose()

    # ---- repair ------------------------------------------------------------

    def repair_symbol(self, helper_shard: ShardVector, failed: int):
        """The one symbol a helper sends toward a failed node.

        Uses only the helper's stored symbols and the public column g'_f,
        so it cannot depend on the repair group or helper set.
        """
        if helper_shard.node_id == failed:
            raise SelfRepair("a node cannot help repair itself")
        f = self.field
        gp = self._gp_cols[failed - 1]
        acc = 0
        for s, c in zip(helper_shard.symbols, gp):
            if s and c:
                acc = f.add(acc, f.mul(s, c))
        return acc

    def repair_functional(self, helper: int, failed: int):
        """The repair symbol as a length-B row over vec(M)."""
        if helper == failed:
            raise SelfRepair("a node cannot help repair itself")
        return self._tensor_row(self._gp_cols[failed - 1], self._g_cols[helper - 1])

    def exchange_functional(self, sender: int, receiver: int):
        """Phase-2 symbol (sender's solved combination against g_receiver)."""
        if sender == receiver:
            raise SelfRepair("no self exchange")
        return self._tensor_row(self._gp_cols[sender - 1], self._g_cols[receiver - 1])

    def cooperative_repair(self, ctx: RepairContext, shards, transcript=None):
        """Regenerate all nodes of ctx.group from the helper shards.

        shards maps node_id -> ShardVector and must cover ctx.helpers.
        transcript, when given, collects (phase, sender, receiver, symbol)
        for every transferred symbol.
        """
        p = self.params
        ctx = repair_context(self, ctx.group, ctx.helpers)
        for h in ctx.helpers:
            if h not in shards:
                raise MissingShard(f"helper shard {h} unavailable")

        f = self.field
        gsub = self.G.submatrix(range(p.k), [h - 1 for h in ctx.helpers])
        gsub_t_inv = gsub.transpose().inverse()

        # phase 1: d symbols toward each replacement; solve for the combination
        solved = {}
        for fj in ctx.group:
            received = []
            for lam in ctx.helpers:
                sym = self.repair_symbol(shards[lam], fj)
                if transcript is not None:
                    transcript.append((1, lam, fj, sym))
                received.append(sym)
            # received = m'_fj^T @ gsub  ->  m'_fj = gsub^T^{-1} @ received
            solved[fj] = gsub_t_inv.mul_vec(tuple(received))

        # phase 2: every replacement sends its combination against g_i
        inbox = {fj: {} for fj in ctx.group}
        for fj in ctx.group:
            for fi in ctx.group:
                if fi == fj:
                    continue
                gi = self._g_cols[fi - 1]
                sym = 0
                for a, b in zip(solved[fj], gi):
                    if a and b:
                        sym = f.add(sym, f.mul(a, b))
                if transcript is not None:
                    transcript.append((2, fj, fi, sym))
                inbox[fi][fj] = sym

        # phase 3: invert the group's t x t submatrix of G'
        gp_sub = self.Gp.submatrix(range(p.t), [g - 1 for g in ctx.group])
        gp_sub_t_inv = gp_sub.transpose().inverse()
        out = []
        for fj in ctx.group:
            gj = self._g_cols[fj - 1]
            w = []
            for fi in ctx.group:
                if fi == fj:
                    sym = 0
                    for a, b in zip(solved[fj], gj):
                        if a and b:
                            sym = f.add(sym, f.mul(a, b))
                else:
                    sym = inbox[fj][fi]
                w.append(sym)
            out.append(ShardVector(fj, gp_sub_t_inv.mul_vec(tuple(w))))
        return out

    # ---- functional protocol (consumed by the eavesdropper machinery) ----

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
        """All (group, helper set) pairs in which the node is repaired."""
        p = self.params
        others = [i for i in range(1, p.n + 1) if i != node]
        for rest in itertools.combinations(others, p.t - 1):
            group = tuple(sorted((node,) + rest))
            pool = [i for i in range(1, p.n + 1) if i not in group]
            for helpers in itertools.combinations(pool, p.d):
                yield group, helpers

    def repair_row_ctx(self, helper: int, failed: int, group, helpers):
        ctx = f"C={','.join(map(str, group))};D={','.join(map(str, helpers))}"
        return f"S_{helper}^{failed}|{ctx}", self.repair_functional(helper, failed)

    def exchange_row_ctx(self, sender: int, receiver: int, group, helpers):
        ctx = f"C={','.join(map(str, group))};D={','.join(map(str, helpers))}"
        return f"Z_{sender}^{receiver}|{ctx}", self.exchange_functional(sender, receiver)

    def nominal_repair_row(self, helper: int, failed: int):
        return self.repair_functional(helper, failed)

    def nominal_exchange_row(self, sender: int, receiver: int):
        return self.exchange_functional(sender, receiver)

    def downloads_for_context(self, node: int, group, helpers):
        """All rows delivered to `node` when repaired under (group, helpers)."""
        rows = [self.repair_row_ctx(lam, node, group, helpers) for lam in helpers]
        rows += [
            self.exchange_row_ctx(j, node, group, helpers) for j in group if j != node
        ]
        return rows

    def granted_rows(self, node: int):
        """Extra functionals handed to the eavesdropper for free (none)."""
        return []

    # ---- internals -------------------------------------------------------------

    def _tensor_row(self, left, right):
        """Row over vec(M) of the bilinear form left^T M right."""
        p = self.params
        f = self.field
        row = [0] * p.B
        for i in range(p.t):
            li = left[i]
            if not li:
                continue
            for c in range(p.k):
                if right[c]:
                    row[i * p.k + c] = f.mul(li, right[c])
        return tuple(row)


@dataclass(frozen=True)
class StabilityWitness:
    """Two contexts in which the same helper->failed transfer differs."""

    helper: int
    failed: int
    first_context: tuple
    first_row: tuple
    second_context: tuple
    second_row: tuple

    def describe(self) -> str:
        c1, d1 = self.first_context
        c2, d2 = self.second_context
        return (
            f"transfer {self.helper}->{self.failed} differs between "
            f"C={c1},D={d1} and C={c2},D={d2}"
        )


def stability_certificate(code):
    """Exhaustive check that repair transfers depend only on (helper, failed).

    Returns None on pass, otherwise a StabilityWitness exhibiting two
    contexts with different transferred functionals.
    """
    for failed in eavesdroppable_nodes(code):
        seen = {}
        for group, helpers in code.contexts(failed):
            for lam in helpers:
                _, row = code.repair_row_ctx(lam, failed, group, helpers)
                if lam not in seen:
                    seen[lam] = ((group, helpers), row)
                elif seen[lam][1] != row:
                    return StabilityWitness(
                        helper=lam,
                        failed=failed,
                        first_context=seen[lam][0],
                        first_row=seen[lam][1],
                        second_context=(group, helpers),
                        second_row=row,
                    )
    return None


def eavesdroppable_nodes(code):
    """Nodes whose full repair-download traversal the code can enumerate."""
    restricted = getattr(code, "supported_failed_nodes", None)
    if restricted is not None:
        return list(restricted)
    return list(range(1, code.params.n + 1))
