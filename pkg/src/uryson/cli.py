"""Command-line front end.

    uryson run MODEL.ury VERB [ARGS...] [flags]
    uryson suite MODEL.ury [--seed N] [--json OUT]

Verbs: eval, join, meet, pos, neg, abs, disjoint, witness, project,
project-complement, project-rank1, project-functional, oracle, suite.

Reports are canonical JSON on stdout (sorted keys, 12-significant-digit
floats), so identical (model, command, seed) runs are byte-identical.
``--json FILE`` additionally writes the same bytes to a file; ``--csv FILE``
writes a probe/value table and is only available for ``eval OP --all``.

Settings precedence: CLI flag > URYSON_SEED (seed only) > model ``set`` lines
> defaults.  Exit codes: 0 success, 1 domain error, 2 parse/command error,
3 suite failures.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys

from .calculus import (
    check_disjoint_iff,
    disjoint_witness,
    rk_eval,
    witness_products,
)
from .dsl import Model, RankOneOpDef, Settings, build_operator, parse_model
from .errors import (
    BadCommand,
    ModelSemanticError,
    ModelSyntaxError,
    UrysonError,
)
from .lattice import Vector, vec
from .operators import KernelOperator, evaluate
from .projections import (
    EpsSchedule,
    ProjectionResult,
    masking_oracle,
    project_band_set,
    project_band_set_complement,
    project_functional,
    project_rank_one,
)
from .report import csv_table, dumps
from .suite import run_suite

__all__ = ["main", "console_entry"]

VERBS = (
    "eval",
    "join",
    "meet",
    "pos",
    "neg",
    "abs",
    "disjoint",
    "witness",
    "project",
    "project-complement",
    "project-rank1",
    "project-functional",
    "oracle",
    "suite",
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uryson",
        description="Lattice calculus for kernel operators: evaluation, "
        "disjointness witnesses, band projections, and a self-check suite.",
    )
    sub = parser.add_subparsers(dest="mode", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("model", help="model file (.ury)")
        p.add_argument("--tol", type=float, default=None, help="comparison tolerance")
        p.add_argument("--eps0", type=float, default=None, help="schedule start epsilon")
        p.add_argument("--factor", type=float, default=None, help="schedule decay factor")
        p.add_argument("--max-steps", type=int, default=None, help="schedule length cap")
        p.add_argument("--cap-support", type=int, default=None, help="fragment enumeration cap")
        p.add_argument("--cap-masks", type=int, default=None, help="mask enumeration cap")
        p.add_argument("--seed", type=int, default=None, help="suite seed")
        p.add_argument("--json", metavar="OUT", default=None, help="also write the report here")

    run_p = sub.add_parser("run", help="run one command against a model")
    add_common(run_p)
    run_p.add_argument("verb", help="one of: " + ", ".join(VERBS))
    run_p.add_argument("args", nargs="*", help="operator/probe names for the verb")
    run_p.add_argument("--all", action="store_true", help="eval at every probe")
    run_p.add_argument("--csv", metavar="OUT", default=None, help="CSV table (eval --all only)")

    suite_p = sub.add_parser("suite", help="run the full self-check suite")
    add_common(suite_p)
    return parser


def _effective_settings(model: Model, ns: argparse.Namespace) -> Settings:
    st = model.settings
    env_seed = os.environ.get("URYSON_SEED")
    if env_seed is not None:
        try:
            st = dataclasses.replace(st, seed=int(env_seed))
        except ValueError:
            raise BadCommand(f"URYSON_SEED must be an integer, got {env_seed!r}")
    overrides = {
        "tol": ns.tol,
        "eps0": ns.eps0,
        "factor": ns.factor,
        "max_steps": ns.max_steps,
        "cap_support": ns.cap_support,
        "cap_masks": ns.cap_masks,
        "seed": ns.seed,
    }
    return dataclasses.replace(
        st, **{k: v for k, v in overrides.items() if v is not None}
    )


def _settings_json(st: Settings) -> dict:
    return {
        "tol": st.tol,
        "eps0": st.eps0,
        "factor": st.factor,
        "max_steps": st.max_steps,
        "cap_support": st.cap_support,
        "cap_masks": st.cap_masks,
        "seed": st.seed,
    }


class _Session:
    """One parsed model plus effective settings; resolves names lazily."""

    def __init__(self, model: Model, st: Settings):
        self.model = model
        self.st = st
        self.sched = EpsSchedule(st.eps0, st.factor, st.max_steps)
        self.inputs: dict = {}

    def op(self, name: str) -> KernelOperator:
        built = build_operator(self.model, name)
        self.inputs.setdefault("operators", []).append(
            {"name": name, "descriptor": built.descriptor()}
        )
        return built

    def probe(self, name: str) -> Vector:
        v = self.model.probe(name)
        self.inputs.setdefault("probes", []).append({"name": name, "value": v})
        return v

    def rk_witness(self, result) -> list:
        return [
            {"coord": i, "fragment": frag, "complement": comp}
            for i, (frag, comp) in enumerate(result.argwitness)
        ]

    def projection_json(self, res: ProjectionResult) -> dict:
        return {
            "value": res.value,
            "stabilized_at": res.stabilized_at,
            "feasible_count": list(res.feasible_count),
            "witness": [
                {"fragment": frag, "mask": mask} for frag, mask in res.witness
            ],
        }


def _need(args: list[str], count: int, usage: str) -> list[str]:
    if len(args) != count:
        raise BadCommand(f"expected {usage}")
    return args


def _dispatch(sess: _Session, verb: str, args: list[str], ns) -> tuple[dict, str | None]:
    """Returns (result payload, optional CSV text)."""
    st = sess.st
    model = sess.model

    if verb == "eval":
        if ns.all:
            (op_name,) = _need(args, 1, "eval OP --all")
            T = sess.op(op_name)
            if not model.probes:
                raise BadCommand("model declares no probes")
            table = [
                {"probe": name, "value": evaluate(T, x)}
                for name, x in model.probes
            ]
            header = ["probe"] + [f"y{i + 1}" for i in range(T.m)]
            rows = [[r["probe"], *r["value"].coords] for r in table]
            return {"table": table}, csv_table(header, rows)
        op_name, probe = _need(args, 2, "eval OP PROBE (or eval OP --all)")
        T = sess.op(op_name)
        x = sess.probe(probe)
        return {"value": evaluate(T, x)}, None

    if ns.csv is not None:
        raise BadCommand("--csv is only available for eval --all")
    if ns.all:
        raise BadCommand("--all is only available for eval")

    if verb in ("join", "meet"):
        a, b, probe = _need(args, 3, f"{verb} OP1 OP2 PROBE")
        T, S = sess.op(a), sess.op(b)
        x = sess.probe(probe)
        r = rk_eval(verb, T, x, S, cap_support=st.cap_support, tol=st.tol)
        return {"value": r.value, "witness": sess.rk_witness(r)}, None

    if verb in ("pos", "neg", "abs"):
        op_name, probe = _need(args, 2, f"{verb} OP PROBE")
        T = sess.op(op_name)
        x = sess.probe(probe)
        r = rk_eval(verb, T, x, cap_support=st.cap_support, tol=st.tol)
        return {"value": r.value, "witness": sess.rk_witness(r)}, None

    if verb == "disjoint":
        if len(args) < 2:
            raise BadCommand("expected disjoint OP1 OP2 [PROBE...]")
        S, T = sess.op(args[0]), sess.op(args[1])
        names = args[2:] or list(model.probe_names())
        if not names:
            raise BadCommand("model declares no probes")
        xs = [sess.probe(nm) for nm in names]
        rep = check_disjoint_iff(
            S, T, xs, st.eps0, cap_support=st.cap_support, tol=st.tol
        )
        return {"report": rep}, None

    if verb == "witness":
        a, b, probe = _need(args, 3, "witness OP1 OP2 PROBE")
        S, T = sess.op(a), sess.op(b)
        x = sess.probe(probe)
        u = Vector.ones(S.m)
        w = disjoint_witness(S, T, x, st.eps0, u, st.cap_support, st.tol)
        products = witness_products(S, T, x, w)
        bound = u.scale(st.eps0)
        return {
            "eps": w.eps,
            "u": w.u,
            "labels": list(w.masks.labels),
            "masks": list(w.masks.items),
            "fragments": list(w.frags.items),
            "products": products,
            "bound_ok": all(p.leq(bound, st.tol) for p in products),
        }, None

    if verb in ("project", "project-complement"):
        set_arg, t_name, probe = _need(args, 3, f"{verb} S1[,S2...] T PROBE")
        members = tuple(sess.op(nm) for nm in set_arg.split(","))
        T = sess.op(t_name)
        x = sess.probe(probe)
        fn = project_band_set if verb == "project" else project_band_set_complement
        res = fn(
            members, T, x, sess.sched,
            cap_support=st.cap_support, cap_masks=st.cap_masks, tol=st.tol,
        )
        return sess.projection_json(res), None

    if verb == "project-rank1":
        r_name, t_name, probe = _need(args, 3, "project-rank1 R T PROBE")
        d = model.operator_def(r_name)
        if not isinstance(d, RankOneOpDef):
            raise BadCommand(f"{r_name!r} is not a rank-one operator")
        phi = sess.op(d.phi)
        T = sess.op(t_name)
        x = sess.probe(probe)
        res = project_rank_one(
            phi, Vector(d.u), T, x, sess.sched,
            cap_support=st.cap_support, tol=st.tol,
        )
        return {
            "band": res.band,
            "complement": res.complement,
            "band_stabilized_at": res.band_stabilized_at,
            "complement_stabilized_at": res.complement_stabilized_at,
            "u": list(d.u),
        }, None

    if verb == "project-functional":
        phi_name, t_name, probe = _need(args, 3, "project-functional PHI T PROBE")
        phi = sess.op(phi_name)
        T = sess.op(t_name)
        x = sess.probe(probe)
        val = project_functional(
            phi, T, x, sess.sched, cap_support=st.cap_support, tol=st.tol
        )
        return {"value": val}, None

    if verb == "oracle":
        a, b, probe = _need(args, 3, "oracle S T PROBE")
        S, T = sess.op(a), sess.op(b)
        x = sess.probe(probe)
        return {"value": masking_oracle(S, T, x, tol=st.tol)}, None

    if verb == "suite":
        _need(args, 0, "suite (no positional arguments)")
        return {"suite": run_suite(model, st.seed)}, None

    raise BadCommand(f"unknown verb {verb!r} (expected one of: {', '.join(VERBS)})")


def _emit(text: str, json_path: str | None) -> None:
    sys.stdout.write(text)
    if json_path:
        with open(json_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _error_exit(exc: UrysonError, exit_code: int, json_path: str | None) -> int:
    body: dict = {"error": {"code": exc.code, "message": str(exc)}}
    if isinstance(exc, ModelSyntaxError):
        body["error"]["line"] = exc.line
        body["error"]["column"] = exc.column
    elif isinstance(exc, ModelSemanticError):
        body["error"]["line"] = exc.line
    _emit(dumps(body), json_path)
    return exit_code


def main(argv: list[str] | None = None) -> int:
    ns = _build_parser().parse_args(argv)
    json_path = ns.json

    try:
        try:
            text = open(ns.model, "r", encoding="utf-8").read()
        except OSError as exc:
            err = UrysonError(f"cannot read model file: {exc}")
            err.code = "io_error"
            return _error_exit(err, 1, json_path)

        try:
            model = parse_model(text)
            st = _effective_settings(model, ns)
        except (ModelSyntaxError, ModelSemanticError, BadCommand) as exc:
            return _error_exit(exc, 2, json_path)

        if ns.mode == "suite":
            verb, args = "suite", []
        else:
            verb, args = ns.verb, list(ns.args)

        sess = _Session(model, st)
        try:
            result, csv_text = _dispatch(
                sess, verb, args, ns if ns.mode == "run" else _SuiteNS()
            )
        except BadCommand as exc:
            return _error_exit(exc, 2, json_path)

        report = {
            "command": {"verb": verb, "args": args},
            "settings": _settings_json(st),
            "inputs": sess.inputs,
            "result": result,
        }
        _emit(dumps(report), json_path)
        if csv_text is not None and ns.mode == "run" and ns.csv:
            with open(ns.csv, "w", encoding="utf-8") as fh:
                fh.write(csv_text)
        if verb == "suite" and not result["suite"]["ok"]:
            return 3
        return 0
    except UrysonError as exc:
        return _error_exit(exc, 1, json_path)


class _SuiteNS:
    """Stand-in namespace for the suite subcommand (no run-only flags)."""

    all = False
    csv = None


def console_entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
