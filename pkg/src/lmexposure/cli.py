"""Command-line front end wiring the pipeline stages to files.

Subcommands: annotate, score, aggregate, industry, demographic, stats,
simulate, contour, validate, and a pipeline meta-command chaining
score -> aggregate -> industry -> stats. All outputs are written
atomically (temp file plus rename) and every run leaves a machine-readable
manifest with parameter values and content digests next to its primary
output. Exit codes: 0 success, 2 configuration problem, 3 input-format
problem, 4 computation problem.
"""

from __future__ import annotations

import argparse
import importlib
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import aggregate as agg
from . import annotate as ann
from . import econ_model as econ
from . import labor_stats as lstats
from . import scores as sc
from . import taxonomy as tax
from .errors import ComputationError, InputFormatError, LmExposureError
from .runio import atomic_write_text, dump_json, write_manifest

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INPUT = 3
EXIT_COMPUTE = 4

CLIENT_ENV_VAR = "LMEXPOSURE_CLIENT"

SCORE_COLUMNS = ("expert", "glm", "gpt4", "internlm", "ensemble")


@dataclass
class RunConfig:
    """What a run consumed and produced, for the manifest."""

    command: str
    inputs: dict[str, Path] = field(default_factory=dict)
    outputs: dict[str, Path] = field(default_factory=dict)
    parameters: dict[str, object] = field(default_factory=dict)
    seed: int | None = None

    def add_input(self, role: str, path: str | Path | None) -> Path | None:
        if path is None:
            return None
        p = Path(path)
        if not p.is_file():
            raise FileNotFoundError(f"input file not found: {p}")
        self.inputs[role] = p
        return p

    def manifest_path(self) -> Path:
        primary = next(iter(self.outputs.values()))
        return primary.with_name(primary.name + ".manifest.json")

    def write_manifest(self) -> None:
        parameters = dict(self.parameters)
        if self.seed is not None:
            parameters["seed"] = self.seed
        write_manifest(
            self.manifest_path(),
            self.command,
            parameters,
            {role: p for role, p in self.inputs.items()},
            {role: p for role, p in self.outputs.items()},
        )


def _emit(config: RunConfig, outputs: dict[str, tuple[Path, str]]) -> None:
    """Atomically write all outputs, then the manifest."""
    for role, (path, text) in outputs.items():
        atomic_write_text(path, text)
        config.outputs[role] = path
    config.write_manifest()


def _read_scores_column(path: str | Path, column: str) -> dict[str, float]:
    table = sc.read_score_table(path)
    return table.column(column)


def _fmt(value: float, full_precision: bool) -> str:
    return repr(float(value)) if full_precision else f"{value:.4f}"


# --- annotate ----------------------------------------------------------------


def _load_live_client(spec: str, model_id: str) -> ann.ClassifierClient:
    """Import ``module:factory`` named by the environment and call it."""
    module_name, _, factory_name = spec.partition(":")
    if not module_name or not factory_name:
        raise InputFormatError(
            f"{CLIENT_ENV_VAR} must look like 'package.module:factory', got {spec!r}"
        )
    module = importlib.import_module(module_name)
    factory = getattr(module, factory_name)
    return factory(model_id)


def cmd_annotate(args: argparse.Namespace) -> int:
    config = RunConfig(command="annotate", seed=args.seed)
    taxonomy = tax.load_taxonomy(config.add_input("taxonomy", args.taxonomy))
    rubric = ann.DEFAULT_RUBRIC
    if args.rubric:
        rubric = Path(config.add_input("rubric", args.rubric)).read_text(encoding="utf-8")

    live_spec = os.environ.get(CLIENT_ENV_VAR)
    if args.mock:
        config.add_input("mock", args.mock)
    elif not live_spec:
        print(
            f"error: no classifier client: pass --mock or set {CLIENT_ENV_VAR}",
            file=sys.stderr,
        )
        return EXIT_CONFIG

    if args.level == "leaf":
        nodes = taxonomy.leaves()
    else:
        nodes = taxonomy.nodes_at_level(tax.Level[args.level.upper()])
    skipped = [n.code.raw for n in nodes if not n.description.strip()]
    if skipped:
        print(
            f"skipping {len(skipped)} occupations with empty descriptions",
            file=sys.stderr,
        )
    nodes = [n for n in nodes if n.description.strip()]
    if not nodes:
        raise ComputationError("no annotatable occupations at the requested level")

    model_ids = [m.strip() for m in args.models.split(",") if m.strip()]
    runs: list[ann.AnnotationRun] = []
    for model_id in model_ids:
        if args.mock:
            client = ann.load_mock_client(args.mock, taxonomy)
        else:
            client = _load_live_client(live_spec, model_id)
        runs.extend(
            ann.annotate_nodes(
                client,
                nodes,
                model_id=model_id,
                rubric=rubric,
                n_samples=args.n_samples,
                max_retries=args.max_retries,
                in_flight=args.in_flight,
            )
        )

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    clock = ann.LogicalClock() if args.mock else ann.utc_now_iso
    store = ann.AnnotationStore(path=out, clock=clock)
    store.append(runs)
    config.outputs["annotations"] = out
    config.parameters = {
        "models": model_ids,
        "n_samples": args.n_samples,
        "max_retries": args.max_retries,
        "level": args.level,
        "client": "mock" if args.mock else live_spec,
    }
    config.write_manifest()
    return EXIT_OK


# --- score -------------------------------------------------------------------


def cmd_score(args: argparse.Namespace) -> int:
    config = RunConfig(command="score", seed=args.seed)
    config.parameters = {"full_precision": args.full_precision}

    if args.annotations:
        runs = ann.read_annotation_store(config.add_input("annotations", args.annotations))
        records = sc.records_from_runs(runs)
        titles = {}
        if args.taxonomy:
            taxonomy = tax.load_taxonomy(config.add_input("taxonomy", args.taxonomy))
            titles = {code: node.title for code, node in taxonomy.index.items()}
        table = sc.table_from_records(records, titles)
        if args.expert:
            panel = sc.read_expert_panel(config.add_input("expert", args.expert))
            for row in table.rows:
                if row.code in panel.scores:
                    row.expert = sc.expert_mean(panel, row.code)
    else:
        table = sc.recompute_ensemble(
            sc.read_score_table(config.add_input("scores", args.scores))
        )

    _emit(
        config,
        {"scores": (Path(args.out), sc.render_score_table(table, args.full_precision))},
    )
    return EXIT_OK


# --- aggregate ---------------------------------------------------------------


def cmd_aggregate(args: argparse.Namespace) -> int:
    config = RunConfig(command="aggregate", seed=args.seed)
    config.parameters = {"column": args.column, "full_precision": args.full_precision}
    taxonomy = tax.load_taxonomy(config.add_input("taxonomy", args.taxonomy))
    leaf_scores = _read_scores_column(config.add_input("scores", args.scores), args.column)
    rolled = tax.aggregate_up(taxonomy, leaf_scores)

    lines = ["code,title,level,score"]
    for node in taxonomy.walk():
        raw = node.code.raw
        if raw in rolled:
            title = '"' + node.title.replace('"', '""') + '"'
            lines.append(
                f"{raw},{title},{node.code.level.name.lower()},"
                f"{_fmt(rolled[raw], args.full_precision)}"
            )
    _emit(config, {"aggregated": (Path(args.out), "\n".join(lines) + "\n")})
    return EXIT_OK


# --- industry / demographic ----------------------------------------------------


def cmd_industry(args: argparse.Namespace) -> int:
    config = RunConfig(command="industry", seed=args.seed)
    config.parameters = {"column": args.column, "full_precision": args.full_precision}
    matrix = agg.IntensityMatrix.from_csv(config.add_input("intensity", args.intensity))
    r_occ = _read_scores_column(config.add_input("scores", args.scores), args.column)
    result = agg.industry_exposure(matrix, r_occ)

    names: dict[str, str] = {}
    if args.industries:
        names = _read_industry_names(config.add_input("industries", args.industries))
    if names:
        lines = ["industry_id,name,score"]
        for ind in matrix.industries:
            name = '"' + names.get(ind, "").replace('"', '""') + '"'
            lines.append(f"{ind},{name},{_fmt(result[ind], args.full_precision)}")
    else:
        lines = ["industry_id,score"]
        for ind in matrix.industries:
            lines.append(f"{ind},{_fmt(result[ind], args.full_precision)}")
    _emit(config, {"industry": (Path(args.out), "\n".join(lines) + "\n")})
    return EXIT_OK


def _read_industry_names(path: str | Path) -> dict[str, str]:
    import csv as _csv

    with open(path, encoding="utf-8", newline="") as handle:
        reader = _csv.DictReader(handle)
        if reader.fieldnames is None or not {"industry_id", "name"}.issubset(reader.fieldnames):
            raise InputFormatError(
                "industry list header must contain industry_id,name", path=str(path), line=1
            )
        return {row["industry_id"]: row["name"] for row in reader}


def _read_industry_scores(path: str | Path) -> dict[str, float]:
    import csv as _csv

    with open(path, encoding="utf-8", newline="") as handle:
        reader = _csv.DictReader(handle)
        if reader.fieldnames is None or not {"industry_id", "score"}.issubset(reader.fieldnames):
            raise InputFormatError(
                "industry exposure header must contain industry_id,score",
                path=str(path),
                line=1,
            )
        out = {}
        for row in reader:
            try:
                out[row["industry_id"]] = float(row["score"])
            except ValueError:
                raise InputFormatError(
                    f"non-numeric score {row['score']!r}",
                    path=str(path),
                    line=reader.line_num,
                ) from None
        return out


def cmd_demographic(args: argparse.Namespace) -> int:
    config = RunConfig(command="demographic", seed=args.seed)
    config.parameters = {"full_precision": args.full_precision}
    shares = agg.DemographicShares.from_csv(
        config.add_input("demographics", args.demographics)
    )
    r_ind = _read_industry_scores(config.add_input("industry_scores", args.industry_scores))
    result = agg.demographic_exposure(shares, r_ind)
    lines = ["age_group,score"]
    for group in shares.age_groups:
        lines.append(f"{group},{_fmt(result[group], args.full_precision)}")
    _emit(config, {"demographic": (Path(args.out), "\n".join(lines) + "\n")})
    return EXIT_OK


# --- stats -------------------------------------------------------------------


def _corr_payload(result: lstats.CorrResult) -> dict[str, object]:
    return {
        "r": result.r,
        "n": result.n,
        "p_value": result.p_value,
        "stars": result.stars,
    }


def cmd_stats(args: argparse.Namespace) -> int:
    config = RunConfig(command="stats", seed=args.seed)
    table = sc.read_score_table(config.add_input("scores", args.scores))
    outputs: dict[str, tuple[Path, str]] = {}

    if args.outcomes:
        outcome = lstats.read_outcome_csv(config.add_input("outcomes", args.outcomes))
        exposure = table.column(args.column)
        report = lstats.scatter_report(exposure, outcome, table.titles())
        payload = {
            "kind": "scatter",
            "column": args.column,
            "outcome_kind": outcome.kind.value,
            "n": report.n,
            "corr": _corr_payload(report.corr),
            "slope": report.slope,
            "intercept": report.intercept,
            "rows": [
                {"code": code, "title": title, "exposure": x, "outcome": y}
                for code, title, x, y in report.rows
            ],
        }
        config.parameters = {"mode": "scatter", "column": args.column}
        if args.plot_data:
            triples = ["x,y,label"]
            for code, _, x, y in report.rows:
                triples.append(f"{_fmt(x, args.full_precision)},{_fmt(y, args.full_precision)},{code}")
            outputs["plot_data"] = (Path(args.plot_data), "\n".join(triples) + "\n")
    elif args.pair:
        a, b = args.pair
        col_a = table.column(a)
        col_b = table.column(b)
        common = sorted(set(col_a) & set(col_b))
        result = lstats.pearson([col_a[c] for c in common], [col_b[c] for c in common])
        payload = {"kind": "pair", "a": a, "b": b, **_corr_payload(result)}
        config.parameters = {"mode": "pair", "a": a, "b": b}
    else:
        columns = {name: table.column(name) for name in SCORE_COLUMNS if table.column(name)}
        summary = {
            name: {
                "count": (entry := lstats.summarize(list(values.values()))).count,
                "mean": entry.mean,
                "std": entry.std,
            }
            for name, values in columns.items()
        }
        panel = lstats.correlation_panel(columns)
        names = list(columns)
        correlations = [
            {"a": a, "b": b, **_corr_payload(panel[(a, b)])}
            for i, a in enumerate(names)
            for b in names[i + 1 :]
        ]
        payload = {"kind": "summary", "columns": summary, "correlations": correlations}
        config.parameters = {"mode": "summary"}

    outputs["report"] = (Path(args.out), dump_json(payload, args.full_precision))
    _emit(config, outputs)
    return EXIT_OK


# --- simulate / contour --------------------------------------------------------


def _scenario_inputs(args: argparse.Namespace, config: RunConfig):
    r_occ = None
    if args.scores:
        r_occ = _read_scores_column(config.add_input("scores", args.scores), args.column)
    sectors, law = econ.load_scenario(
        config.add_input("scenario", args.scenario), r_occ=r_occ, rho_override=args.rho
    )
    return sectors, law


def _law_payload(law: econ.GrowthLaw) -> dict[str, object]:
    if isinstance(law, econ.ExponentialGrowth):
        return {"kind": "exponential", "rho": law.rho}
    return {"kind": "tabulated", "points": [list(p) for p in law.points]}


def cmd_simulate(args: argparse.Namespace) -> int:
    config = RunConfig(command="simulate", seed=args.seed)
    sectors, law = _scenario_inputs(args, config)
    scenario = econ.AdoptionScenario.solve(sectors, law)
    rows = []
    for sector, decision in zip(scenario.sectors, scenario.decisions):
        row = {
            "id": sector.id,
            "share": sector.output_share,
            "delta": sector.damage_ratio,
            "exposure": sector.exposure,
            "growth_factor": econ.growth_factor(law, sector.exposure),
            "decision": decision,
            "damage": econ.sector_damage(sector, law, decision),
        }
        if isinstance(law, econ.ExponentialGrowth):
            row["threshold"] = econ.adoption_threshold(sector.damage_ratio, law)
        rows.append(row)
    payload = {
        "kind": "simulate",
        "law": _law_payload(law),
        "aggregate_growth": scenario.aggregate_growth,
        "adopting_sectors": sum(scenario.decisions),
        "sectors": rows,
    }
    config.parameters = {"rho": args.rho}
    _emit(config, {"report": (Path(args.out), dump_json(payload, args.full_precision))})
    return EXIT_OK


def _parse_grid(spec: str | None, default: list[float]) -> list[float]:
    if spec is None:
        return default
    if ":" in spec:
        lo_s, hi_s, n_s = spec.split(":")
        lo, hi, n = float(lo_s), float(hi_s), int(n_s)
        if n < 1:
            raise InputFormatError(f"grid needs at least one point, got {n}")
        if n == 1:
            return [lo]
        return [lo + (hi - lo) * i / (n - 1) for i in range(n)]
    return [float(v) for v in spec.split(",")]


def cmd_contour(args: argparse.Namespace) -> int:
    config = RunConfig(command="contour", seed=args.seed)
    sectors, law = _scenario_inputs(args, config)
    sectors = sorted(sectors, key=lambda s: s.exposure, reverse=True)
    delta_grid = _parse_grid(args.delta_grid, econ.default_delta_grid())
    ratio_grid = _parse_grid(args.ratio_grid, econ.default_ratio_grid())
    grid = econ.contour_grid(sectors, law, delta_grid, ratio_grid)

    header = "delta\\ratio," + ",".join(
        _fmt(r, args.full_precision) for r in grid.ratio_grid
    )
    lines = [header]
    for delta, row in zip(grid.delta_grid, grid.values):
        lines.append(
            _fmt(delta, args.full_precision)
            + ","
            + ",".join(_fmt(v, args.full_precision) for v in row)
        )
    config.parameters = {
        "rho": args.rho,
        "delta_points": len(delta_grid),
        "ratio_points": len(ratio_grid),
    }
    _emit(config, {"contour": (Path(args.out), "\n".join(lines) + "\n")})
    return EXIT_OK


# --- validate ----------------------------------------------------------------


def validate_inputs(args: argparse.Namespace) -> list[str]:
    """Dry-run schema and invariant checks; diagnostics, never exceptions."""
    diagnostics: list[str] = []

    def _check(label: str, path: str | None, loader) -> None:
        if path is None:
            return
        if not Path(path).is_file():
            diagnostics.append(f"{label}: file not found: {path}")
            return
        try:
            loader(path)
        except LmExposureError as exc:
            diagnostics.append(f"{label}: {exc}")

    taxonomy = None
    if args.taxonomy and Path(args.taxonomy).is_file():
        try:
            taxonomy = tax.load_taxonomy(args.taxonomy)
        except LmExposureError:
            taxonomy = None
    _check("taxonomy", args.taxonomy, tax.load_taxonomy)
    _check("scores", args.scores, sc.read_score_table)
    _check("intensity", args.intensity, agg.IntensityMatrix.from_csv)
    _check("demographics", args.demographics, agg.DemographicShares.from_csv)
    _check("outcomes", args.outcomes, lstats.read_outcome_csv)
    _check("scenario", args.scenario, econ.load_scenario)
    _check("annotations", args.annotations, ann.read_annotation_store)
    _check("mock", args.mock, lambda p: ann.load_mock_client(p, taxonomy))
    return diagnostics


def cmd_validate(args: argparse.Namespace) -> int:
    diagnostics = validate_inputs(args)
    for line in diagnostics:
        print(line)
    return EXIT_INPUT if diagnostics else EXIT_OK


# --- pipeline ----------------------------------------------------------------


def cmd_pipeline(args: argparse.Namespace) -> int:
    """score -> aggregate -> industry -> stats against one fixture set."""
    config = RunConfig(command="pipeline", seed=args.seed)
    config.parameters = {"column": args.column, "full_precision": args.full_precision}
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    table = sc.recompute_ensemble(
        sc.read_score_table(config.add_input("scores", args.scores))
    )
    taxonomy = tax.load_taxonomy(config.add_input("taxonomy", args.taxonomy))
    matrix = agg.IntensityMatrix.from_csv(config.add_input("intensity", args.intensity))

    outputs: dict[str, tuple[Path, str]] = {}
    outputs["scores"] = (
        outdir / "score_table.csv",
        sc.render_score_table(table, args.full_precision),
    )

    rolled = tax.aggregate_up(taxonomy, table.column(args.column))
    lines = ["code,title,level,score"]
    for node in taxonomy.walk():
        raw = node.code.raw
        if raw in rolled:
            title = '"' + node.title.replace('"', '""') + '"'
            lines.append(
                f"{raw},{title},{node.code.level.name.lower()},"
                f"{_fmt(rolled[raw], args.full_precision)}"
            )
    outputs["aggregated"] = (outdir / "aggregated_scores.csv", "\n".join(lines) + "\n")

    industry = agg.industry_exposure(matrix, table.column(args.column))
    ind_lines = ["industry_id,score"]
    for ind in matrix.industries:
        ind_lines.append(f"{ind},{_fmt(industry[ind], args.full_precision)}")
    outputs["industry"] = (outdir / "industry_exposure.csv", "\n".join(ind_lines) + "\n")

    columns = {name: table.column(name) for name in SCORE_COLUMNS if table.column(name)}
    summary = {
        name: {
            "count": (entry := lstats.summarize(list(values.values()))).count,
            "mean": entry.mean,
            "std": entry.std,
        }
        for name, values in columns.items()
    }
    panel = lstats.correlation_panel(columns)
    names = list(columns)
    correlations = [
        {"a": a, "b": b, **_corr_payload(panel[(a, b)])}
        for i, a in enumerate(names)
        for b in names[i + 1 :]
    ]
    outputs["stats"] = (
        outdir / "stats_summary.json",
        dump_json(
            {"kind": "summary", "columns": summary, "correlations": correlations},
            args.full_precision,
        ),
    )

    for role, (path, text) in outputs.items():
        atomic_write_text(path, text)
        config.outputs[role] = path
    write_manifest(
        outdir / "manifest.json",
        config.command,
        config.parameters | ({"seed": args.seed} if args.seed is not None else {}),
        config.inputs,
        config.outputs,
    )
    return EXIT_OK


# --- parser ------------------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser, out_required: bool = True) -> None:
    parser.add_argument("--out", required=out_required, help="output file path")
    parser.add_argument("--seed", type=int, default=None, help="run seed, recorded in the manifest")
    parser.add_argument(
        "--full-precision",
        action="store_true",
        help="disable the default 4-decimal presentation rounding",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lmexposure",
        description=(
            "Occupational exposure pipeline: annotation, scoring, taxonomy and "
            "industry aggregation, labor-market statistics, and the "
            "multi-sector adoption model."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("annotate", help="annotate occupations through a classifier client")
    p.add_argument("--taxonomy", required=True, help="taxonomy CSV (code,title,description,excluded)")
    p.add_argument("--mock", help=f"mock client JSON config; omit to use {CLIENT_ENV_VAR}")
    p.add_argument("--models", default="glm,gpt4,internlm", help="comma-separated model ids")
    p.add_argument("--n-samples", type=int, default=8, help="samples per occupation (default 8)")
    p.add_argument("--max-retries", type=int, default=2, help="retries per sample (default 2)")
    p.add_argument("--in-flight", type=int, default=1, help="concurrent requests for capable clients")
    p.add_argument("--rubric", help="file with replacement rubric text")
    p.add_argument(
        "--level",
        default="leaf",
        choices=["leaf", "large", "medium", "small", "fine"],
        help="which taxonomy nodes to annotate (default leaf nodes)",
    )
    _add_common(p)
    p.set_defaults(handler=cmd_annotate)

    p = sub.add_parser("score", help="build the canonical score table")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--annotations", help="annotation store JSONL to score")
    group.add_argument("--scores", help="existing score table; recompute the ensemble column")
    p.add_argument("--taxonomy", help="taxonomy CSV for occupation titles")
    p.add_argument("--expert", help="expert panel CSV (code,score rows, one per expert)")
    _add_common(p)
    p.set_defaults(handler=cmd_score)

    p = sub.add_parser("aggregate", help="roll leaf scores up the taxonomy")
    p.add_argument("--taxonomy", required=True)
    p.add_argument("--scores", required=True, help="score table supplying leaf scores")
    p.add_argument("--column", default="ensemble", choices=SCORE_COLUMNS)
    _add_common(p)
    p.set_defaults(handler=cmd_aggregate)

    p = sub.add_parser("industry", help="project occupational scores onto industries")
    p.add_argument("--intensity", required=True, help="industry x occupation share matrix CSV")
    p.add_argument("--scores", required=True)
    p.add_argument("--column", default="ensemble", choices=SCORE_COLUMNS)
    p.add_argument("--industries", help="optional industry id/name list for labeling")
    _add_common(p)
    p.set_defaults(handler=cmd_industry)

    p = sub.add_parser("demographic", help="project industry scores onto age groups")
    p.add_argument("--demographics", required=True, help="age group x industry share matrix CSV")
    p.add_argument("--industry-scores", required=True, help="industry exposure CSV")
    _add_common(p)
    p.set_defaults(handler=cmd_demographic)

    p = sub.add_parser("stats", help="summary panels, correlations, scatter reports")
    p.add_argument("--scores", required=True)
    p.add_argument("--pair", nargs=2, metavar=("A", "B"), help="correlate two score columns")
    p.add_argument("--outcomes", help="outcome CSV (code,<kind>) for a scatter report")
    p.add_argument("--column", default="ensemble", choices=SCORE_COLUMNS)
    p.add_argument("--plot-data", help="also write (x,y,label) triples to this path")
    _add_common(p)
    p.set_defaults(handler=cmd_stats)

    p = sub.add_parser("simulate", help="solve adoption decisions for a scenario")
    p.add_argument("--scenario", required=True, help="scenario JSON")
    p.add_argument("--scores", help="score table for occupation-mix exposures")
    p.add_argument("--column", default="ensemble", choices=SCORE_COLUMNS)
    p.add_argument("--rho", type=float, default=None, help="override the exponential law rho")
    _add_common(p)
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("contour", help="growth over a damage x adoption-ratio grid")
    p.add_argument("--scenario", required=True)
    p.add_argument("--scores", help="score table for occupation-mix exposures")
    p.add_argument("--column", default="ensemble", choices=SCORE_COLUMNS)
    p.add_argument("--rho", type=float, default=None)
    p.add_argument("--delta-grid", help="lo:hi:n or comma list (default 0:0.95:21)")
    p.add_argument("--ratio-grid", help="lo:hi:n or comma list (default 0:1:21)")
    _add_common(p)
    p.set_defaults(handler=cmd_contour)

    p = sub.add_parser("validate", help="dry-run checks on input files, no computation")
    p.add_argument("--taxonomy")
    p.add_argument("--scores")
    p.add_argument("--intensity")
    p.add_argument("--demographics")
    p.add_argument("--outcomes")
    p.add_argument("--scenario")
    p.add_argument("--annotations")
    p.add_argument("--mock")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("pipeline", help="score, aggregate, industry, stats in one run")
    p.add_argument("--scores", required=True)
    p.add_argument("--taxonomy", required=True)
    p.add_argument("--intensity", required=True)
    p.add_argument("--column", default="ensemble", choices=SCORE_COLUMNS)
    p.add_argument("--outdir", required=True, help="directory for the four output files")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--full-precision", action="store_true")
    p.set_defaults(handler=cmd_pipeline)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InputFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ComputationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
