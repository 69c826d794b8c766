"""Command-line entry point: ``hermlab <subcommand> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration
error, 3 invalid model.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import balanced as bal
from . import hermitian as herm
from .cohomology import FLAVORS, ClosednessViolation, compute_space, dimension_table
from .forms import Form
from .identities import CASE_IDS, DEFAULT_TOLERANCE, ConfigError, SuiteConfig, run_suite
from .models import CATALOG_NAMES, ManifestError, TorusModel, resolve_model, validate_model
from .operators import KINDS, ZeroH, export_matrix_csv
from .scalars import EXACT, gr

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_INVALID_MODEL = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _load(name: str):
    try:
        return resolve_model(name)
    except KeyError:
        raise UsageError(f"unknown model {name!r}; catalog: {', '.join(CATALOG_NAMES)}")
    except ManifestError as exc:
        raise UsageError(str(exc))


def _load_valid(name: str, err):
    model = _load(name)
    report = validate_model(model)
    if not report.ok:
        err.write(_dump(report.to_dict()) + "\n")
        return None, report
    return model, report


def _metric(model, name: Optional[str]):
    if name is None:
        name = model.default_metrics[0] if model.default_metrics else "standard"
    try:
        return herm.model_metric(model, name)
    except KeyError as exc:
        raise UsageError(str(exc.args[0]))


# ---------------------------------------------------------------- models


def _metric_entry(metric) -> dict:
    if metric.is_diagonal:
        return {"diag": [str(x) for x in metric.diagonal]}
    return {"hermitian": [[x.text() for x in row] for row in metric.hermitian]}


def manifest_of(model) -> dict:
    """Manifest-shaped description; for Lie models it loads back as the same model."""
    info = {
        "name": model.name,
        "n": model.n,
        "metrics": {k: _metric_entry(herm.model_metric(model, k)) for k in sorted(model.metric_specs)},
        "default_metrics": list(model.default_metrics),
    }
    if isinstance(model, TorusModel):
        info["fourier_cutoff"] = model.cutoff
        return info
    basis = model.alg.basis
    d = {}
    for k in range(1, model.n + 1):
        for label, form in ((f"e{k}", model.d_hol[k]), (f"ebar{k}", model.d_anti[k])):
            if label.startswith("ebar") and form == model.d_hol[k].conjugate():
                continue
            if form.data:
                d[label] = [[c.text(), str(basis[i])] for i, c in form.items()]
    info["d"] = d
    if model.volume != 1:
        info["volume"] = model.volume.text()
    return info


def _cmd_models(args, out, err) -> int:
    if args.action == "list":
        rows = []
        for name in CATALOG_NAMES:
            m = _load(name)
            rows.append({"name": name, "n": m.n, "kind": "fourier" if isinstance(m, TorusModel) else "lie", "metrics": sorted(m.metric_specs)})
        if args.format == "json":
            out.write(_dump(rows) + "\n")
        else:
            for r in rows:
                out.write(f"{r['name']:<10} n={r['n']}  {r['kind']:<8} metrics: {', '.join(r['metrics'])}\n")
        return EXIT_OK
    if not args.target:
        raise UsageError(f"models {args.action} needs a model name or manifest path")
    model = _load(args.target)
    report = validate_model(model)
    if args.action == "validate":
        if args.format == "json" or not report.ok:
            (out if report.ok else err).write(_dump(report.to_dict()) + "\n")
        else:
            out.write(f"{model.name}: valid ({len(report.checks)} checks)\n")
        return EXIT_OK if report.ok else EXIT_INVALID_MODEL
    if not report.ok:
        err.write(_dump(report.to_dict()) + "\n")
        return EXIT_INVALID_MODEL
    info = manifest_of(model)
    out.write(_dump(info) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------- cohomology


def _cmd_cohomology(args, out, err) -> int:
    model, _ = _load_valid(args.model, err)
    if model is None:
        return EXIT_INVALID_MODEL
    flavors = args.flavors.split(",") if args.flavors else list(FLAVORS)
    for f in flavors:
        if f not in FLAVORS:
            raise UsageError(f"unknown flavor {f!r}; expected one of {', '.join(FLAVORS)}")
    table = dimension_table(model, flavors)
    if args.format == "json":
        out.write(_dump({"model": model.name, "dimensions": table}) + "\n")
        return EXIT_OK
    n = model.n
    out.write(f"model {model.name} (n={n})\n")
    for flavor in flavors:
        row = table[flavor]
        if flavor == "DR":
            out.write("DR   " + " ".join(f"b{k}={row[str(k)]}" for k in range(2 * n + 1)) + "\n")
            continue
        out.write(f"{flavor}\n")
        header = "  p\\q " + "".join(f"{q:>4}" for q in range(n + 1))
        out.write(header + "\n")
        for p in range(n + 1):
            out.write(f"  {p:>3} " + "".join(f"{row[f'{p},{q}']:>4}" for q in range(n + 1)) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------- analyze-metric


def _class_section(model, metric, beta, flavor: str) -> dict:
    try:
        d = bal.lefschetz_h2_decompose(model, metric, beta, flavor)
    except (bal.MetricFlagViolation, bal.DegenerateClassError) as exc:
        return {"flavor": flavor, "error": f"{type(exc).__name__}: {exc}"}
    section = {"flavor": flavor, "decomposition": d.to_dict()}
    try:
        section["partition_cell"] = bal.sign_partition(model, metric, beta, flavor)
    except bal.NonRealClass:
        section["partition_cell"] = None
    return section


def analyze_metric(model, metric, flavors=None, beta=None) -> dict:
    """Classification, class-level maps and decompositions for one metric.

    ``beta`` is an optional closed representative whose class is decomposed
    for each requested flavor.
    """
    out: dict = {"model": model.name, "metric": metric.name}
    flags = bal.classify_metric(model, metric)
    out["classification"] = flags.to_dict()
    if not (model.ring == EXACT and not isinstance(model, TorusModel)):
        return out
    out["ddbar_hypothesis"] = bal.ddbar_hypothesis_check(model).to_dict()
    if flags.balanced:
        out["hard_lefschetz"] = bal.hard_lefschetz_map(model, metric).to_dict()
        out["hyperplane_de_rham"] = bal.primitive_hyperplane(model, metric, "DR-H2").to_dict()
        out["vanishing"] = bal.vanishing_checks_deg_bal(model, metric).to_dict()
    if flags.gauduchon:
        out["hyperplane_bott_chern"] = bal.primitive_hyperplane(model, metric, "BC-11").to_dict()
    if beta is not None:
        out["class"] = {"representative": beta.serialize()}
        out["class"]["sections"] = [_class_section(model, metric, beta, f) for f in (flavors or bal.HYPERPLANE_FLAVORS)]
        return out
    decomps = {}
    for flavor, ok, exact in (("DR-H2", flags.balanced, flags.degenerate_balanced), ("BC-11", flags.gauduchon, flags.aeppli_exact_power)):
        if flavors and flavor not in flavors:
            continue
        if not ok or exact:
            continue
        space = compute_space(model, "DR", 2) if flavor == "DR-H2" else compute_space(model, "BC", (1, 1))
        rows = []
        for idx, rep in enumerate(space.basis):
            d = bal.lefschetz_h2_decompose(model, metric, rep, flavor)
            rows.append({"basis_index": idx, "lambda": d.to_dict()["lambda"], "routes_agree": d.routes_agree})
        decomps[flavor] = rows
    out["lambda_of_basis_classes"] = decomps
    return out


def _cmd_analyze(args, out, err) -> int:
    model, _ = _load_valid(args.model, err)
    if model is None:
        return EXIT_INVALID_MODEL
    metric = _metric(model, args.metric)
    flavors = None
    if args.flavor:
        flavors = args.flavor.split(",")
        for f in flavors:
            if f not in bal.HYPERPLANE_FLAVORS:
                raise UsageError(f"unknown flavor {f!r}; expected one of {', '.join(bal.HYPERPLANE_FLAVORS)}")
    beta = None
    if args.class_form:
        if isinstance(model, TorusModel):
            raise UsageError("--class is available for Lie models")
        try:
            beta = Form.parse(args.class_form, model.n, EXACT)
        except (ValueError, KeyError) as exc:
            raise UsageError(f"cannot parse --class: {exc}")
    try:
        result = analyze_metric(model, metric, flavors, beta)
    except bal.NotPrimitiveClass as exc:
        raise UsageError(str(exc))
    except ClosednessViolation as exc:
        raise UsageError(f"--class representative is not closed: {exc}")
    if args.format == "json":
        out.write(_dump(result) + "\n")
    else:
        c = result["classification"]
        out.write(f"{model.name} / {metric.name}\n")
        for key in ("kahler", "balanced", "gauduchon", "degenerate_balanced", "aeppli_exact_power"):
            out.write(f"  {key:<22} {c[key]}\n")
        if "hard_lefschetz" in result:
            hl = result["hard_lefschetz"]
            out.write(f"  hard Lefschetz H1->H{2 * model.n - 1}: rank {hl['rank']} ({hl['domain_dim']}x{hl['target_dim']}), audit {'ok' if hl['audit_passed'] else 'FAILED'}\n")
        for key in ("hyperplane_de_rham", "hyperplane_bott_chern"):
            if key in result:
                hp = result[key]
                out.write(f"  {key:<22} dim {hp['dimension']} of {hp['ambient_dim']} (codim {hp['codimension']})\n")
        if "ddbar_hypothesis" in result:
            out.write(f"  {'ddbar hypothesis':<22} {result['ddbar_hypothesis']['holds']}\n")
        for sec in result.get("class", {}).get("sections", []):
            if "error" in sec:
                out.write(f"  class [{sec['flavor']}]  {sec['error']}\n")
            else:
                dec = sec["decomposition"]
                out.write(f"  class [{sec['flavor']}]  lambda {dec['lambda']} (integral {dec['lambda_integral']}), cell {sec['partition_cell']}\n")
    return EXIT_OK


# ---------------------------------------------------------------- verify


def _cmd_verify(args, out, err) -> int:
    cases = args.cases.split(",") if args.cases else list(CASE_IDS)
    models = args.models.split(",") if args.models else list(SuiteConfig.models)
    cfg = SuiteConfig(cases=cases, models=models, trials=args.trials, seed=args.seed, tolerance=args.tolerance, threads=args.threads)
    try:
        report = run_suite(cfg)
    except ConfigError as exc:
        raise UsageError(str(exc))
    if report.summary()["invalid_models"]:
        for name in report.summary()["invalid_models"]:
            err.write(_dump(report.validation[name]) + "\n")
    text = report.to_json() + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.format == "json":
        out.write(text)
    else:
        out.write(f"{'case':<5} {'model':<10} {'metric':<16} {'status':<5} {'trials':>6} {'fail':>5} {'max residual':>13}  note\n")
        for r in report.reports:
            note = r.skip_reason or (r.first_failure or {}).get("assertion", "")
            out.write(f"{r.case:<5} {r.model:<10} {r.metric:<16} {r.status:<5} {r.trials:>6} {r.failures:>5} {r.max_residual:>13.3e}  {note}\n")
        s = report.summary()
        invalid = f", invalid models: {', '.join(s['invalid_models'])}" if s["invalid_models"] else ""
        out.write(f"overall: {'PASS' if s['passed'] else 'FAIL'} ({s['failures']} failing trials{invalid})\n")
    if report.summary()["invalid_models"]:
        return EXIT_INVALID_MODEL
    return EXIT_OK if report.passed else EXIT_FAILED


# ---------------------------------------------------------------- export


def _cmd_export(args, out, err) -> int:
    model, _ = _load_valid(args.model, err)
    if model is None:
        return EXIT_INVALID_MODEL
    if isinstance(model, TorusModel):
        raise UsageError("matrix export is available for Lie models")
    metric = _metric(model, args.metric)
    if args.kind not in KINDS:
        raise UsageError(f"unknown operator kind {args.kind!r}; expected one of {', '.join(KINDS)}")
    try:
        h = gr(args.h) if args.h is not None else None
    except (ValueError, TypeError):
        raise UsageError(f"cannot parse h {args.h!r}; use re,im such as 1,1")
    if args.degree is not None and not 0 <= args.degree <= 2 * model.n:
        raise UsageError(f"degree must lie in 0..{2 * model.n}")
    try:
        text = export_matrix_csv(model, metric, args.kind, h, args.degree)
    except ZeroH as exc:
        raise UsageError(str(exc))
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hermlab", description="Exact Hermitian geometry on Lie-algebra and torus models.")
    sub = p.add_subparsers(dest="command")

    m = sub.add_parser("models", help="list, validate or show models")
    m.add_argument("action", choices=["list", "validate", "show"])
    m.add_argument("target", nargs="?", help="catalog name or manifest path")
    m.add_argument("--format", choices=["table", "json"], default="table")

    c = sub.add_parser("cohomology", help="dimension table of cohomology groups")
    c.add_argument("--model", required=True)
    c.add_argument("--flavors", help="comma-separated subset of DR,DOL,BC,A")
    c.add_argument("--format", choices=["table", "json"], default="table")

    a = sub.add_parser("analyze-metric", help="classify a metric and compute class-level maps")
    a.add_argument("--model", required=True)
    a.add_argument("--metric")
    a.add_argument("--flavor", help="DR-H2, BC-11 or both comma-separated")
    a.add_argument("--class", dest="class_form", help="closed 2-form such as '1|1 : 0,1; 2|2 : 0,1'")
    a.add_argument("--format", choices=["table", "json"], default="table")

    v = sub.add_parser("verify", help="run the identity suite")
    v.add_argument("--cases")
    v.add_argument("--models")
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    v.add_argument("--threads", type=int, default=1)
    v.add_argument("--output", help="also write the JSON report here")
    v.add_argument("--format", choices=["table", "json"], default="table")

    e = sub.add_parser("export", help="CSV of an operator matrix")
    e.add_argument("--model", required=True)
    e.add_argument("--metric")
    e.add_argument("--kind", required=True)
    e.add_argument("--h", help="h for twisted operators, e.g. 1,1 for 1+i")
    e.add_argument("--degree", type=int)
    e.add_argument("--output")
    return p


COMMANDS = {
    "models": _cmd_models,
    "cohomology": _cmd_cohomology,
    "analyze-metric": _cmd_analyze,
    "verify": _cmd_verify,
    "export": _cmd_export,
}


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
        if not args.command:
            raise UsageError("a subcommand is required: " + ", ".join(COMMANDS))
        return COMMANDS[args.command](args, out, err)
    except UsageError as exc:
        err.write(f"hermlab: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
