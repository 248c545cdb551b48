"""Command line entry points: headless runs, the HTTP service, demo data."""

from __future__ import annotations

import time
import warnings

import click

from .dataset import class_balance, load_csv
from .metrics import METRIC_GROUPS, MetricId
from .session import Session, Settings


@click.group()
def main() -> None:
    """Evolutionary hyperparameter search with votable ensembles."""


@main.command()
@click.option("--data", "data_path", required=True, type=click.Path(exists=True),
              help="CSV file with a header row.")
@click.option("--label", "label_column", required=True, help="Name of the label column.")
@click.option("--metrics", "group", default="balanced",
              type=click.Choice(sorted(METRIC_GROUPS)), show_default=True)
@click.option("--select", "select", default=None,
              help="Comma-separated metric subset of the group (default: whole group).")
@click.option("--n", default=100, show_default=True, help="Random-search models per algorithm.")
@click.option("--k", default=10, show_default=True, help="Cross-validation folds.")
@click.option("--stages", default=2, show_default=True, help="Evolution stages after S0.")
@click.option("--auto-ensemble", "auto_ensemble", default=4, show_default=True,
              help="Greedy ensemble size cap (0 disables).")
@click.option("--seed", default=0, show_default=True, help="Master seed.")
@click.option("--out", "out_path", default="report.json", show_default=True,
              type=click.Path(), help="Report path; figures and models.csv go next to it.")
@click.option("--save-session", "session_path", default=None, type=click.Path(),
              help="Also persist the full session document here.")
@click.option("--jobs", default=1, show_default=True, help="Worker processes for training.")
def run(data_path, label_column, group, select, n, k, stages, auto_ensemble, seed,
        out_path, session_path, jobs) -> None:
    """Run search, evolution stages and auto-ensemble headlessly."""
    t0 = time.time()
    d = load_csv(data_path, label_column)
    balance = class_balance(d)
    click.echo(f"dataset: {d.n_instances} instances, {d.n_features} features, "
               f"classes {balance.count_per_class[0]}/{balance.count_per_class[1]} "
               f"(recommended metrics: {balance.recommended_group})")
    if select:
        selected = tuple(MetricId(m.strip()) for m in select.split(","))
    else:
        selected = METRIC_GROUPS[group]
    session = Session(d, Settings(group, selected, n=n, k=k, seed=seed))

    with click.progressbar(length=100, label=f"S0 random search ({5 * n} models)") as bar:
        session.run_search(progress=_bar_cb(bar), n_jobs=jobs)
    click.echo(f"  evaluated {len(session.models)} models, "
               f"{len(session.failures)} failures")

    for _ in range(stages):
        stage = session.current_stage + 1
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            with click.progressbar(length=100, label=f"stage S{stage}") as bar:
                record = session.launch_stage(progress=_bar_cb(bar), n_jobs=jobs)
        for w in caught:
            click.echo(f"  note: {w.message}")
        generated = sum(len(ids) for per in record.child_ids.values()
                        for ids in per.values())
        over = sum(1 for st in record.path_stats.values() if st.direction.value == "over")
        click.echo(f"  S{stage}: {generated} children, {over} over-paths")

    from .report import best_single, write_report

    top = best_single(session)
    click.echo(f"best single model: {top.id} accuracy="
               f"{top.metric_scores[MetricId.ACCURACY]:.4f} overall={top.overall:.4f}")
    if auto_ensemble > 0:
        spec, best = session.auto_compose(auto_ensemble)
        click.echo(f"auto ensemble ({len(spec.model_ids)} members {list(spec.model_ids)}): "
                   f"accuracy={spec.pooled_scores[MetricId.ACCURACY]:.4f} "
                   f"overall={spec.overall:.4f}")
    if session_path:
        session.save(session_path)
        click.echo(f"session saved to {session_path}")
    write_report(session, out_path, runtime_seconds=time.time() - t0)
    click.echo(f"report written to {out_path} ({time.time() - t0:.1f}s)")


def _bar_cb(bar):
    state = {"seen": 0}

    def cb(fraction: float) -> None:
        target = int(fraction * 100)
        if target > state["seen"]:
            bar.update(target - state["seen"])
            state["seen"] = target

    return cb


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option("--data-dir", default="sessions", show_default=True,
              help="Directory for persisted session documents.")
def serve(host, port, data_dir) -> None:
    """Start the HTTP service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(data_dir=data_dir), host=host, port=port)


@main.command("demo-data")
@click.option("--out", "out_path", default="heart_like.csv", show_default=True,
              type=click.Path())
@click.option("--seed", default=None, type=int, help="Override the fixed generator seed.")
def demo_data(out_path, seed) -> None:
    """Write the bundled synthetic cardiology-style dataset as CSV."""
    from .synth import write_heart_like

    kwargs = {} if seed is None else {"seed": seed}
    write_heart_like(out_path, **kwargs)
    click.echo(f"wrote {out_path}")


if __name__ == "__main__":
    main()
