"""Command-line shell: encode/decode/repair plus the verification commands.

Exit codes: 0 success, 1 a verification failed, 2 usage or config error.
Flags override config-file fields; COOPSTORE_SEED is the seed fallback.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from pathlib import Path

from . import __version__
from .errors import CoopstoreError, InvalidConfig
from .eve import (
    NOT_COVERED,
    EveModel,
    bandwidth_comparison,
    capacity_table,
    lemma_suite,
    specific_verifications,
)
from .field import FieldSpec, field_create
from .legacy import CodeB, code_a_attack, code_a_init, code_b_attack
from .matrix import Mat
from .report import ReportDoc, capacity_rows, text_table, write_capacity_csv
from .secure import scheme_create, verify_secrecy_sweep
from .shardfile import (
    ShardMeta,
    read_manifest,
    read_shard,
    shard_filename,
    write_manifest,
    write_shard,
)
from .stable import CodeParams, StableCode, repair_context, stability_certificate
from .striping import pack_payload, stripe_symbols, unpack_payload

DEFAULT_PARAMS = {"n": 6, "k": 3, "d": 3, "t": 2}
DEFAULT_FIELD = {"p": 11}
DEFAULT_CODE_A = {"d": 3, "omega": 2}


def _parse_kv(text: str) -> dict:
    out = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise InvalidConfig(f"expected key=value, got {part!r}")
        key, value = part.split("=", 1)
        out[key.strip()] = int(value, 0)
    return out


def _load_config(args) -> dict:
    config = {}
    if getattr(args, "config", None):
        try:
            config = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise InvalidConfig(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise InvalidConfig(f"config is not valid JSON: {exc}") from exc
    if getattr(args, "params", None):
        config["params"] = {**config.get("params", {}), **_parse_kv(args.params)}
    if getattr(args, "field", None):
        config["field"] = _parse_kv(args.field)
    if getattr(args, "variant", None):
        config["variant"] = args.variant
    if getattr(args, "omega", None) is not None:
        config["omega"] = args.omega
    if getattr(args, "seed", None) is not None:
        config["seed"] = args.seed
    elif "seed" not in config and os.environ.get("COOPSTORE_SEED"):
        config["seed"] = int(os.environ["COOPSTORE_SEED"])
    config.setdefault("seed", 0)
    config.setdefault("variant", "stable")
    return config


def _field_from_config(config) -> object:
    fld = config.get("field") or dict(DEFAULT_FIELD)
    if "p" in fld:
        spec = FieldSpec.prime(fld["p"])
    elif "m" in fld:
        spec = FieldSpec.binary(fld["m"], fld.get("poly"))
    else:
        raise InvalidConfig("field must give p=<prime> or m=<degree>[,poly=<bits>]")
    return field_create(spec)


def _spec_of(field) -> FieldSpec:
    return field.spec


def _params_from_config(config) -> CodeParams:
    raw = {**DEFAULT_PARAMS, **config.get("params", {})}
    field = _field_from_config(config)
    return CodeParams.mscr(
        n=raw["n"], k=raw["k"], d=raw["d"], t=raw["t"], q=field.order,
        beta=raw.get("beta", 1),
    )


def _make_code(config):
    variant = config.get("variant", "stable")
    field = _field_from_config(config)
    params = _params_from_config(config)
    if variant == "stable":
        return StableCode.create(params, field)
    if variant == "code-b":
        return CodeB.create(params, field)
    raise InvalidConfig(f"variant {variant!r} not supported here")


def _echo_config(config, field, params) -> dict:
    return {
        **config,
        "field": {"kind": field.kind, "order": field.order},
        "params": {
            "n": params.n, "k": params.k, "d": params.d, "t": params.t,
            "alpha": params.alpha, "beta": params.beta,
            "beta_prime": params.beta_prime, "B": params.B, "q": params.q,
        },
    }


# ---------------------------------------------------------------------------
# encode / decode / repair
# ---------------------------------------------------------------------------


def cmd_encode(args) -> int:
    config = _load_config(args)
    code = _make_code(config)
    if code.variant != "stable":
        raise InvalidConfig("shard persistence is implemented for the stable variant")
    p = code.params
    data = Path(args.input).read_bytes()
    symbols = pack_payload(data, p.q, p.B)
    generations = stripe_symbols(symbols, p.B)

    per_node = {j: [] for j in range(1, p.n + 1)}
    for gen in generations:
        shards = code.encode(Mat(code.field, p.t, p.k, gen))
        for s in shards:
            per_node[s.node_id].extend(s.symbols)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for node, payload in per_node.items():
        meta = ShardMeta(
            variant="stable",
            field_spec=_spec_of(code.field),
            params=p,
            node_id=node,
            generations=len(generations),
        )
        write_shard(out_dir / shard_filename(node), meta, payload)
    write_manifest(out_dir, _echo_config(config, code.field, p), sorted(per_node))
    print(f"encoded {len(data)} bytes into {p.n} shards x {len(generations)} generations")
    return 0


def _load_shards(directory, node_ids=None):
    directory = Path(directory)
    metas, payloads = {}, {}
    candidates = node_ids
    if candidates is None:
        candidates = []
        for path in sorted(directory.glob("node_*.shard")):
            candidates.append(int(path.stem.split("_")[1]))
    for node in candidates:
        path = directory / shard_filename(node)
        if not path.exists():
            continue
        meta, symbols = read_shard(path)
        metas[node] = meta
        payloads[node] = symbols
    if not metas:
        raise InvalidConfig(f"no shard files found in {directory}")
    return metas, payloads


def _shards_per_generation(meta, payloads):
    """node -> per-generation ShardVector list."""
    from .stable import ShardVector

    alpha, gens = meta.params.alpha, meta.generations
    out = []
    for g in range(gens):
        gen_shards = {}
        for node, symbols in payloads.items():
            gen_shards[node] = ShardVector(node, tuple(symbols[g * alpha : (g + 1) * alpha]))
        out.append(gen_shards)
    return out


def cmd_decode(args) -> int:
    metas, payloads = _load_shards(args.shard_dir, _parse_ids(args.nodes))
    meta = next(iter(metas.values()))
    p = meta.params
    code = StableCode.create(p, field_create(meta.field_spec))
    symbols = []
    for gen_shards in _shards_per_generation(meta, payloads):
        data = code.reconstruct(list(gen_shards.values())[: p.k])
        symbols.extend(data.data)
    blob = unpack_payload(symbols, p.q)
    Path(args.output).write_bytes(blob)
    print(f"decoded {len(blob)} bytes from {len(payloads)} shards")
    return 0


def cmd_repair(args) -> int:
    group = _parse_ids(args.group)
    if not group:
        raise InvalidConfig("--group is required, e.g. --group 2,5")
    metas, payloads = _load_shards(args.shard_dir)
    available = {n for n in metas if n not in group}
    meta = next(iter(metas.values()))
    p = meta.params
    code = StableCode.create(p, field_create(meta.field_spec))
    helpers = _parse_ids(args.helpers) or sorted(available)[: p.d]
    ctx = repair_context(code, group, helpers)

    regenerated = {f: [] for f in ctx.group}
    transcript = []
    for gen_shards in _shards_per_generation(meta, payloads):
        helper_shards = {n: gen_shards[n] for n in ctx.helpers if n in gen_shards}
        for s in code.cooperative_repair(ctx, helper_shards, transcript=transcript):
            regenerated[s.node_id].extend(s.symbols)

    gens = meta.generations
    phase1 = sum(1 for x in transcript if x[0] == 1)
    phase2 = sum(1 for x in transcript if x[0] == 2)
    expect1 = p.t * p.d * p.beta * gens
    expect2 = p.t * (p.t - 1) * p.beta_prime * gens
    if (phase1, phase2) != (expect1, expect2):
        raise CoopstoreError(
            f"transfer accounting broken: {(phase1, phase2)} != {(expect1, expect2)}"
        )
    out_dir = Path(args.shard_dir)
    for node, payload in regenerated.items():
        node_meta = ShardMeta(
            variant=meta.variant,
            field_spec=meta.field_spec,
            params=p,
            node_id=node,
            generations=gens,
        )
        write_shard(out_dir / shard_filename(node), node_meta, payload)
    print(
        f"regenerated nodes {','.join(map(str, ctx.group))} from helpers "
        f"{','.join(map(str, ctx.helpers))}; transfers: phase1={phase1} phase2={phase2}"
    )
    return 0


def _parse_ids(text):
    if not text:
        return None
    return tuple(int(x) for x in str(text).split(",") if x.strip())


# ---------------------------------------------------------------------------
# attack / sweep / verify
# ---------------------------------------------------------------------------


def cmd_attack(args) -> int:
    config = _load_config(args)
    rng = random.Random(config["seed"])
    report = ReportDoc(command="attack", config=config)
    t0 = time.monotonic()
    variant = config.get("variant")
    if variant == "code-a":
        field = _field_from_config({"field": config.get("field") or dict(DEFAULT_FIELD)})
        d = config.get("params", {}).get("d", DEFAULT_CODE_A["d"])
        omega = config.get("omega", DEFAULT_CODE_A["omega"])
        params = code_a_init(d, field, omega)
        a = tuple(rng.randrange(field.order) for _ in range(params.alpha))
        b = tuple(rng.randrange(field.order) for _ in range(params.alpha))
        result = code_a_attack(params, a, b)
        exact = result.recovered_a == a and result.recovered_b == b
        report.results = {
            "variant": "code-a",
            "recovered": "EXACT" if exact else "MISMATCH",
            "leaked_symbols": result.leaked_entropy,
            "message_symbols": params.B,
            "leaked_rows": list(result.observations.labels),
        }
        if not exact:
            report.fail("code-a attack did not recover the message")
        if result.leaked_entropy != params.B:
            report.fail("code-a leak is not total")
        print(
            f"code-a attack: recovered {report.results['recovered']}, "
            f"leaked {result.leaked_entropy}/{params.B} symbols"
        )
    elif variant == "code-b":
        code = _make_code({**config, "variant": "code-b"})
        p = code.params
        data = Mat(code.field, p.t, p.k, [rng.randrange(p.q) for _ in range(p.B)])
        result = code_b_attack(code, data)
        exact = result.recovered == data
        report.results = {
            "variant": "code-b",
            "recovered": "EXACT" if exact else "MISMATCH",
            "leaked_symbols": result.leaked_entropy,
            "message_symbols": p.B,
            "groups": [list(g) for g in result.groups],
            "helpers": list(result.helpers),
            "leaked_rows": list(result.observations.labels),
        }
        if not exact:
            report.fail("code-b attack did not recover the message")
        print(
            f"code-b attack: recovered {report.results['recovered']}, "
            f"leaked {result.leaked_entropy}/{p.B} symbols via sliding groups"
        )
    else:
        raise InvalidConfig("attack needs --variant code-a or code-b")
    report.timings_ms["attack"] = int(1000 * (time.monotonic() - t0))
    _emit(report, args)
    return 0 if report.passed else 1


def cmd_capacity_sweep(args) -> int:
    from .eve import CapacityCell, measured_secrecy_capacity, predicted_secrecy_capacity

    config = _load_config(args)
    code = _make_code(config)
    compare = code.variant == "stable"
    report = ReportDoc(command="capacity-sweep", config=config)
    t0 = time.monotonic()
    if "eve" in config:
        eve = EveModel(
            E=tuple(config["eve"].get("E", ())), F=tuple(config["eve"].get("F", ()))
        )
        predicted = (
            predicted_secrecy_capacity(code.params, eve.l1, eve.l2)
            if compare
            else NOT_COVERED
        )
        cells = [
            CapacityCell(
                l1=eve.l1,
                l2=eve.l2,
                E=eve.E,
                F=eve.F,
                measured=measured_secrecy_capacity(code, eve),
                predicted=predicted,
            )
        ]
    else:
        pairs = None
        if "pairs" in config.get("sweep", {}):
            pairs = [tuple(x) for x in config["sweep"]["pairs"]]
        cells = capacity_table(code, pairs=pairs, compare_predicted=compare)
    report.timings_ms["sweep"] = int(1000 * (time.monotonic() - t0))
    rows = capacity_rows(cells)
    report.results = {"variant": code.variant, "cells": rows, "placements": len(rows)}
    for cell in cells:
        if compare and not cell.matches:
            report.fail(
                f"measured {cell.measured} != predicted {cell.predicted} at "
                f"l1={cell.l1} l2={cell.l2} E={cell.E} F={cell.F}"
            )
    print(
        text_table(
            ["l1", "l2", "E", "F", "measured", "predicted", "match"],
            [
                [r["l1"], r["l2"], r["E"] or "-", r["F"] or "-", r["measured"], r["predicted"], r["match"]]
                for r in rows
            ],
        )
    )
    if args.csv:
        write_capacity_csv(args.csv, cells)
    _emit(report, args)
    return 0 if report.passed else 1


def cmd_verify(args) -> int:
    config = _load_config(args)
    code = _make_code(config)
    p = code.params
    report = ReportDoc(command="verify", config=config)
    t0 = time.monotonic()

    witness = stability_certificate(code)
    report.results["stability"] = "pass" if witness is None else witness.describe()
    if witness is not None:
        report.fail(f"stability: {witness.describe()}")
        print("stability witness:")
        print(f"  first : C={witness.first_context[0]} D={witness.first_context[1]}")
        print(f"          row {witness.first_row}")
        print(f"  second: C={witness.second_context[0]} D={witness.second_context[1]}")
        print(f"          row {witness.second_row}")

    lemmas = lemma_suite(code)
    report.results["lemmas"] = lemmas.summary()
    for name, chk in lemmas.checks.items():
        if not chk.passed:
            report.fail(f"{name}: {chk.witness}")

    if code.variant == "stable":
        verif = {}
        for l2 in range(1, p.k):
            for l1 in range(0, p.k - l2):
                res = specific_verifications(code, l1, l2)
                verif[f"l1={l1},l2={l2}"] = res.summary()
                for name, chk in res.checks.items():
                    if not chk.passed:
                        report.fail(f"verification {name} at (l1={l1},l2={l2}): {chk.witness}")
        report.results["placement_verifications"] = verif

    # entropy oracle cross-check on seeded random observation sets
    from fractions import Fraction

    from .entropy import brute_force_entropy, entropy_symbols, observations
    from .field import prime_field

    rng = random.Random(config["seed"])
    oracle_cases = 0
    for _ in range(40):
        for q, bmax in ((2, 8), (3, 5)):
            fld = prime_field(q)
            b = rng.randint(1, bmax)
            rows = [
                (f"r{i}", tuple(rng.randrange(q) for _ in range(b)))
                for i in range(rng.randint(0, b + 1))
            ]
            obs = observations(fld, b, rows)
            if brute_force_entropy(obs) != Fraction(entropy_symbols(obs)):
                report.fail(f"entropy oracle mismatch on a random {q}^{b} instance")
            oracle_cases += 1
    report.results["entropy_oracle_cases"] = oracle_cases

    msr, mscr = bandwidth_comparison(p.n, p.k, p.d, p.t, p.B)
    report.results["bandwidth"] = {"msr_total": str(msr), "mscr_total": str(mscr)}
    print(f"bandwidth per {p.t}-failure repair: MSCR {mscr} {'<' if mscr < msr else '='} MSR {msr}")

    report.timings_ms["verify"] = int(1000 * (time.monotonic() - t0))
    for name, chk in lemmas.checks.items():
        print(f"lemma {name}: {'pass' if chk.passed else 'FAIL'} ({chk.checked} cases)")
    print(f"stability: {report.results['stability']}")
    print(f"verify: {'PASS' if report.passed else 'FAIL'}")
    _emit(report, args)
    return 0 if report.passed else 1


def cmd_secure_verify(args) -> int:
    config = _load_config(args)
    if "field" not in config:
        config["field"] = {"m": 4}
    code = _make_code({**config, "variant": "stable"})
    report = ReportDoc(command="secure-verify", config=config)
    t0 = time.monotonic()
    l1, l2 = args.l1, args.l2
    scheme = scheme_create(code, l1, l2)
    report.results["secret_symbols"] = scheme.secret_len
    report.results["random_symbols"] = scheme.random_len
    checks = verify_secrecy_sweep(scheme)
    placements = []
    for chk in checks:
        placements.append(
            {
                "E": list(chk.eve.E),
                "F": list(chk.eve.F),
                "observed_rank": chk.observed_rank,
                "mutual_information": chk.mutual_information,
                "pass": chk.passed,
            }
        )
        if not chk.passed:
            report.fail(f"leak at E={chk.eve.E} F={chk.eve.F}: I={chk.mutual_information}")
    report.results["placements"] = placements
    report.timings_ms["secure-verify"] = int(1000 * (time.monotonic() - t0))
    print(
        f"secure mode (l1={l1}, l2={l2}): secret={scheme.secret_len} random={scheme.random_len} "
        f"placements={len(checks)} all-zero-leak={report.passed}"
    )
    _emit(report, args)
    return 0 if report.passed else 1


def _emit(report: ReportDoc, args) -> None:
    if getattr(args, "report", None):
        report.write_json(args.report)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coopstore",
        description="cooperative regenerating storage codes with exact secrecy verification",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, variant_choices=("stable", "code-b")):
        sp.add_argument("--config", help="JSON config file; flags override its fields")
        sp.add_argument("--params", help="code parameters, e.g. n=6,k=3,d=3,t=2")
        sp.add_argument("--field", help="field, e.g. p=11 or m=4[,poly=0x13]")
        sp.add_argument("--seed", type=int, help="PRNG seed (fallback: COOPSTORE_SEED)")
        sp.add_argument("--report", help="write the JSON report here")
        if variant_choices:
            sp.add_argument("--variant", choices=variant_choices)

    sp = sub.add_parser("encode", help="stripe and encode a file into n shard files")
    common(sp)
    sp.add_argument("--input", required=True)
    sp.add_argument("--out-dir", required=True)
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("decode", help="reconstruct the original file from k shards")
    sp.add_argument("--shard-dir", required=True)
    sp.add_argument("--output", required=True)
    sp.add_argument("--nodes", help="comma-separated node ids to read (default: all present)")
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("repair", help="regenerate failed nodes' shard files")
    sp.add_argument("--shard-dir", required=True)
    sp.add_argument("--group", required=True, help="failed node ids, e.g. 2,5")
    sp.add_argument("--helpers", help="helper node ids (default: lowest available)")
    sp.set_defaults(func=cmd_repair)

    sp = sub.add_parser("attack", help="run an eavesdropping attack demonstration")
    common(sp, variant_choices=("code-a", "code-b"))
    sp.add_argument("--omega", type=int, help="code-a field generator")
    sp.set_defaults(func=cmd_attack)

    sp = sub.add_parser("capacity-sweep", help="measured vs predicted secrecy capacity")
    common(sp)
    sp.add_argument("--csv", help="also write the capacity table as CSV")
    sp.set_defaults(func=cmd_capacity_sweep)

    sp = sub.add_parser("verify", help="lemma suite, stability, oracle and bandwidth checks")
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("secure-verify", help="rank-metric precoder zero-leakage sweep")
    common(sp, variant_choices=None)
    sp.add_argument("--l1", type=int, default=1)
    sp.add_argument("--l2", type=int, default=1)
    sp.set_defaults(func=cmd_secure_verify)

    return parser


def main(argv=None) -> int:
    from .errors import (
        FieldTooSmall,
        InadmissibleOmega,
        NonIntegralParams,
        NonPrimeModulus,
        NotGenerator,
        ReduciblePolynomial,
    )

    config_errors = (
        InvalidConfig,
        InadmissibleOmega,
        NotGenerator,
        FieldTooSmall,
        NonIntegralParams,
        NonPrimeModulus,
        ReduciblePolynomial,
    )
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except config_errors as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CoopstoreError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
