"""Command-line interface: ``hetgan <command> [options]``."""

import argparse
import json
import logging
import shutil
import sys
from pathlib import Path

import numpy as np
import pandas as pd

from .. import __version__
from ..exceptions import ReplicaError, TrainingDivergedError, UndefinedMetricError
from ..inference import infer, infer_dataset, read_rindex, write_rindex
from ..losses import component_deltas
from ..metrics import (
    agreement_table,
    lemma1_diagnostic,
    pattern_agr_index,
    pattern_c_index,
    select_hyper,
)
from ..synthdata import (
    VARIANTS,
    fit_reference,
    make_cohort,
    read_dataset,
    write_cohort,
    write_dataset,
)
from ..training import load_checkpoint, save_checkpoint, train, train_replicas
from .config import RunConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ARGUMENT = 2
EXIT_DATA = 3
EXIT_CONVERGENCE = 4
EXIT_IO = 5


class UsageError(ValueError):
    """A command was called without the inputs it needs."""


def _write_json(path, doc):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n", encoding="utf-8")
    return path


def _cohort_path(args, config):
    path = args.cohort or config.data.cohort
    if path is None:
        raise UsageError("No cohort file given, pass one or set data.cohort")
    return path


def _truth_path(args, config):
    return getattr(args, "truth", None) or config.data.truth


def _load_training_data(args, config):
    dataset = read_dataset(_cohort_path(args, config))
    if args.standardized:
        return dataset, None
    return fit_reference(dataset)


def _cn_rows(checkpoint, dataset, standardized):
    """CN rows on the model's scale."""
    if standardized:
        return dataset.cn
    covariates = None
    if dataset.covariates is not None:
        covariates = dataset.covariates[dataset.is_cn]
    if checkpoint.reference is None:
        raise ValueError(
            "The checkpoint holds no reference statistics, pass --standardized"
        )
    return checkpoint.reference.apply(dataset.cn, covariates)


def _bound_summary(checkpoint, cn, seed, n_triples):
    diagnostic = lemma1_diagnostic(checkpoint.bundle, cn, seed, n_triples=n_triples)
    return {
        "k2": diagnostic.k2,
        "min_slack": diagnostic.min_slack,
        "violations": diagnostic.violations,
        "n_triples": int(diagnostic.slack.shape[0]),
    }


def cmd_generate(args, config):
    data = config.data
    cohort = make_cohort(
        data.variant,
        n_cn=data.n_cn,
        n_pt=data.n_pt,
        n_features=data.n_features,
        seed=data.seed,
        n_patterns=data.n_patterns,
        n_covariates=data.n_covariates,
        covariate_effect=data.covariate_effect,
    )
    paths = write_cohort(cohort, config.output.dir)
    logger.info(
        "Generated %s cohort with %d CN and %d PT rows in %s",
        data.variant,
        data.n_cn,
        data.n_pt,
        config.output.dir,
    )
    for path in paths.values():
        print(path)
    return EXIT_OK


def cmd_preprocess(args, config):
    dataset = read_dataset(_cohort_path(args, config), _truth_path(args, config))
    standardized, stats = fit_reference(dataset)
    out = Path(config.output.dir)
    write_dataset(standardized, out / "standardized.csv")
    _write_json(out / "reference.json", stats.asdict())
    print(out / "standardized.csv")
    return EXIT_OK


def cmd_train(args, config):
    dataset, reference = _load_training_data(args, config)
    checkpoint = train(dataset, config.train, reference=reference)
    path = save_checkpoint(checkpoint, Path(config.output.dir) / "checkpoint.json")
    print(path)
    if not checkpoint.converged:
        logger.warning(
            "Stopped at max_iterations=%d before the stopping rule fired",
            checkpoint.iteration,
        )
        if not args.allow_unconverged:
            return EXIT_CONVERGENCE
    return EXIT_OK


def _cell_name(n_patterns, lam):
    return "M{}_lam{:g}".format(n_patterns, lam)


def _run_cell(dataset, reference, config, n_patterns, lam, out):
    sweep = config.sweep
    train_config = config.train.replace(n_patterns=n_patterns, lam=lam)
    checkpoints = train_replicas(
        dataset,
        train_config,
        n_replicas=sweep.n_replicas,
        base_seed=sweep.base_seed,
        reference=reference,
        workers=sweep.workers,
    )
    paths = []
    for i, checkpoint in enumerate(checkpoints):
        path = out / _cell_name(n_patterns, lam) / "replica_{:02d}.json".format(i)
        paths.append(save_checkpoint(checkpoint, path))
    r_list = [infer(c, dataset.pt, dataset.pt_ids).values for c in checkpoints]
    return agreement_table(r_list, workers=sweep.workers), paths


def cmd_sweep(args, config):
    dataset, reference = _load_training_data(args, config)
    out = Path(config.output.dir)
    out.mkdir(parents=True, exist_ok=True)
    tables, paths, rows, summary = {}, {}, [], []
    for n_patterns, lam in config.sweep.cells:
        try:
            table, cell_paths = _run_cell(
                dataset, reference, config, n_patterns, lam, out
            )
        except (TrainingDivergedError, ReplicaError, UndefinedMetricError) as exc:
            logger.warning("Cell M=%d lam=%g failed: %s", n_patterns, lam, exc)
            summary.append((n_patterns, lam, np.nan, "failed"))
            continue
        tables[(n_patterns, lam)] = table
        paths[(n_patterns, lam)] = cell_paths
        summary.append((n_patterns, lam, table.mean, "ok"))
        rows.extend((n_patterns, lam, a, b, v) for a, b, v in table.pairs())

    pd.DataFrame(
        rows, columns=["cell_M", "cell_lambda", "replica_a", "replica_b", "value"]
    ).to_csv(out / "agreement.csv", index=False, float_format="%.12g")
    pd.DataFrame(summary, columns=["M", "lambda", "mean_agreement", "status"]).to_csv(
        out / "summary.csv", index=False, float_format="%.12g"
    )
    if not tables:
        logger.error("Every sweep cell failed")
        return EXIT_CONVERGENCE

    selection = select_hyper(tables)
    chosen = paths[(selection.n_patterns, selection.lam)][selection.replica]
    shutil.copyfile(chosen, out / "selected_checkpoint.json")
    _write_json(
        out / "selected.json",
        {
            "n_patterns": selection.n_patterns,
            "lam": selection.lam,
            "replica": selection.replica,
            "mean_agreement": tables[(selection.n_patterns, selection.lam)].mean,
            "checkpoint": str(chosen),
        },
    )
    logger.info(
        "Selected M=%d lam=%g replica %d",
        selection.n_patterns,
        selection.lam,
        selection.replica,
    )
    print(out / "selected.json")
    return EXIT_OK


def cmd_infer(args, config):
    if args.checkpoint is None:
        raise UsageError("infer needs --checkpoint")
    checkpoint = load_checkpoint(args.checkpoint)
    dataset = read_dataset(_cohort_path(args, config))
    r = infer_dataset(checkpoint, dataset, raw=not args.standardized)
    path = write_rindex(
        r, Path(config.output.dir) / "rindex.csv", config.output.lo, config.output.hi
    )
    print(path)
    return EXIT_OK


def _rindex_for(args, dataset):
    """R-indices of the PT rows, from a checkpoint or a precomputed file."""
    if args.rindex is not None:
        r = read_rindex(args.rindex)
        index = {s: i for i, s in enumerate(r.subject_ids)}
        missing = [s for s in dataset.pt_ids if s not in index]
        if missing:
            raise ValueError(
                "{} lacks {} PT subjects, e.g. {}".format(
                    args.rindex, len(missing), missing[0]
                )
            )
        return r.values[[index[s] for s in dataset.pt_ids]], None
    if args.checkpoint is None:
        raise UsageError("evaluate needs --checkpoint or --rindex")
    checkpoint = load_checkpoint(args.checkpoint)
    r = infer_dataset(checkpoint, dataset, raw=not args.standardized)
    return r.values, checkpoint


def cmd_evaluate(args, config):
    dataset = read_dataset(_cohort_path(args, config), _truth_path(args, config))
    values, checkpoint = _rindex_for(args, dataset)
    report = {"n_subjects": int(values.shape[0]), "n_patterns": int(values.shape[1])}

    if dataset.truth is not None:
        result = pattern_c_index(values, dataset.truth)
        report["mode"] = "truth"
        report["pattern_c_index"] = result.mean
    else:
        # agreement-only mode
        report["mode"] = "agreement"
        if args.against is not None:
            other = load_checkpoint(args.against)
            r_other = infer_dataset(other, dataset, raw=not args.standardized)
            result = pattern_agr_index(values, r_other.values)
            report["pattern_agr_index"] = result.mean
        else:
            result = None
            logger.warning("No truth and no --against checkpoint, diagnostics only")
    if result is not None:
        report["permutation"] = list(result.permutation)
        report["per_dimension"] = [float(v) for v in result.values]

    if checkpoint is not None:
        cn = _cn_rows(checkpoint, dataset, args.standardized)
        report["distance_bound"] = _bound_summary(
            checkpoint, cn, config.train.seed, args.triples
        )

    path = _write_json(Path(config.output.dir) / "evaluation.json", report)
    print(json.dumps(report, sort_keys=True, indent=1))
    logger.info("Wrote evaluation to %s", path)
    return EXIT_OK


def pattern_map(checkpoint, cn, feature_names, rng, n_rows=200):
    """
    Mean absolute change each pattern induces on every feature.

    Every component is set to full severity on its own for a sample of CN
    rows.

    Returns
    -------
    table : DataFrame
        One row per pattern (``pattern_1`` ...), one column per feature.
    """
    rows = cn[rng.choice(cn.shape[0], size=min(n_rows, cn.shape[0]), replace=False)]
    z = np.ones((rows.shape[0], checkpoint.n_patterns))
    deltas = component_deltas(checkpoint.bundle, rows, z)
    return pd.DataFrame(
        [np.abs(q).mean(axis=0) for q in deltas],
        index=["pattern_{}".format(i + 1) for i in range(len(deltas))],
        columns=feature_names,
    )


def cmd_diagnose(args, config):
    if args.checkpoint is None:
        raise UsageError("diagnose needs --checkpoint")
    checkpoint = load_checkpoint(args.checkpoint)
    dataset = read_dataset(_cohort_path(args, config))
    cn = _cn_rows(checkpoint, dataset, args.standardized)
    out = Path(config.output.dir)

    summary = _bound_summary(checkpoint, cn, config.train.seed, args.triples)
    _write_json(out / "diagnostics.json", summary)
    table = pattern_map(
        checkpoint, cn, dataset.feature_names, np.random.default_rng(config.train.seed)
    )
    out.mkdir(parents=True, exist_ok=True)
    table.to_csv(out / "pattern_map.csv", index_label="pattern", float_format="%.12g")
    if summary["violations"] > 0:
        logger.warning(
            "Distance bound violated on %.2f%% of triples", 100 * summary["violations"]
        )
    print(json.dumps(summary, sort_keys=True, indent=1))
    return EXIT_OK


COMMANDS = {
    "generate": (cmd_generate, "Write a semi-synthetic cohort with planted patterns"),
    "preprocess": (cmd_preprocess, "Residualize and standardize a cohort"),
    "train": (cmd_train, "Train one model"),
    "sweep": (cmd_sweep, "Train replicas over the (M, lambda) grid and select"),
    "infer": (cmd_infer, "Write the R-indices of the PT rows"),
    "evaluate": (cmd_evaluate, "Score R-indices against truth or another model"),
    "diagnose": (cmd_diagnose, "Distance-bound check and pattern map"),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="YAML run configuration")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--variant", choices=sorted(VARIANTS))
    common.add_argument("--replicas", type=int)
    common.add_argument("--workers", type=int)
    common.add_argument("--lambda", dest="lam", type=float)
    common.add_argument("--num-patterns", dest="n_patterns", type=int)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="hetgan",
        description="Learn severity representations of disease heterogeneity.",
        epilog="exit codes: 0 success, 2 arguments or configuration, 3 data or "
        "checkpoint, 4 convergence, 5 I/O",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, (func, help_text) in COMMANDS.items():
        sub = subparsers.add_parser(name, parents=[common], help=help_text)
        sub.set_defaults(func=func)
        if name == "generate":
            continue
        sub.add_argument("cohort", nargs="?", help="cohort CSV")
        sub.add_argument(
            "--standardized",
            action="store_true",
            help="the cohort is already on the model's scale",
        )
        if name == "train":
            sub.add_argument(
                "--allow-unconverged",
                action="store_true",
                help="exit with 0 when max_iterations is reached before the "
                "stopping rule fires (the checkpoint is written either way)",
            )
        if name in ("infer", "evaluate", "diagnose"):
            sub.add_argument("--checkpoint", type=Path)
        if name in ("preprocess", "evaluate"):
            sub.add_argument("--truth", help="severity CSV of the PT rows")
        if name == "evaluate":
            sub.add_argument("--rindex", type=Path, help="precomputed R-index CSV")
            sub.add_argument(
                "--against", type=Path, help="checkpoint to measure agreement with"
            )
        if name in ("evaluate", "diagnose"):
            sub.add_argument("--triples", type=int, default=1000)
    return parser


def main(argv=None):
    """Run a command and return its exit code."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        config = RunConfig.load(args.config) if args.config else RunConfig()
        config = config.with_overrides(
            seed=args.seed,
            variant=args.variant,
            replicas=args.replicas,
            workers=args.workers,
            lam=args.lam,
            n_patterns=args.n_patterns,
            out=args.out,
        )
    except ValueError as exc:
        logger.error("Invalid configuration: %s", exc)
        return EXIT_ARGUMENT
    except OSError as exc:
        logger.error("Cannot read configuration: %s", exc)
        return EXIT_IO

    try:
        return args.func(args, config)
    except UsageError as exc:
        logger.error("%s", exc)
        return EXIT_ARGUMENT
    except (TrainingDivergedError, ReplicaError) as exc:
        logger.error("Training failed: %s", exc)
        return EXIT_CONVERGENCE
    except ValueError as exc:
        logger.error("Invalid data: %s", exc)
        return EXIT_DATA
    except OSError as exc:
        logger.error("I/O failure: %s", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
