import functools
import logging
import sys
import time
from pathlib import Path

import click

from svdyn.errors import InvariantError, ResourceError, SvdynError

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

EXIT_ASSERTION = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

FILE = click.Path(exists=True, dir_okay=False, path_type=Path)


def exits_on_error(func):
    """Map svdyn errors onto exit codes. Invariant breaches propagate with their traceback."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except InvariantError:
            raise
        except ResourceError as e:
            click.echo(f"Error: {e}", err=True)
            sys.exit(EXIT_RESOURCE)
        except (SvdynError, OSError) as e:
            click.echo(f"Error: {e}", err=True)
            sys.exit(EXIT_USAGE)

    return wrapper


def _rationals(text: str) -> list:
    from svdyn.rational import as_rational

    try:
        return [as_rational(part) for part in text.split(",")]
    except (TypeError, ValueError) as e:
        raise click.BadParameter(str(e))


def _interval(text: str) -> tuple:
    values = _rationals(text)
    if len(values) != 2:
        raise click.BadParameter(f"expected LO,HI, got {text!r}")
    return tuple(values)


def _load(path: Path):
    from svdyn.plrel import parse, read_text

    text = read_text(path)
    return parse(text), text


def _emit(rel, output: Path | None) -> None:
    from svdyn.plrel import serialize, write_relation

    if output is None:
        click.echo(serialize(rel), nl=False)
    else:
        write_relation(rel, output)
        click.echo(f"Wrote {len(rel.pieces)} pieces to {output}")


def _show(run, as_json: bool) -> None:
    click.echo(run.render_json() if as_json else run.render_text())


@click.group()
@click.option("--verbose", "-v", is_flag=True, default=False, help="Log progress at INFO level")
def main(verbose):
    """Set-valued piecewise-linear maps on [0, 1] and their inverse limits."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format=LOG_FORMAT)


@main.command()
@click.argument("file", type=FILE)
@click.option("--json", "as_json", is_flag=True, default=False, help="Machine-readable report")
@click.option("--assert", "assert_", is_flag=True, default=False, help="Exit 1 if an asserted property is false")
@click.option("-p", "--property", "properties", multiple=True, help="Property to assert (default: ivp)")
@click.option("--timing", is_flag=True, default=False, help="Add elapsed seconds to the report")
@exits_on_error
def check(file, as_json, assert_, properties, timing):
    """Classify a relation: IVP, weak IVP, lightness, almost nonfissility, ..."""
    from svdyn.classify import PROPERTY_NAMES, classify
    from svdyn.report import RunReport, add_properties

    for name in properties:
        if name not in PROPERTY_NAMES:
            raise click.BadParameter(f"unknown property {name!r}", param_hint="--property")
    started = time.perf_counter()
    rel, text = _load(file)
    report = classify(rel)
    run = add_properties(RunReport.for_input(str(file), text), report)
    if timing:
        run.elapsed = time.perf_counter() - started
    _show(run, as_json)

    if assert_:
        failing = [name for name in properties or ("ivp",) if report.value(name) is not True]
        if failing:
            logger.info(f"Asserted properties false: {', '.join(failing)}")
            sys.exit(EXIT_ASSERTION)


@main.command()
@click.argument("file", type=FILE)
@click.option("--period", type=click.IntRange(min=1), required=True, help="Exact period to search for")
@click.option("--budget", type=click.IntRange(min=1), help="Maximum piece sequences to explore")
@click.option("--json", "as_json", is_flag=True, default=False)
@exits_on_error
def cycle(file, period, budget, as_json):
    """Find cycles of an exact period."""
    from svdyn.dynamics import find_cycles
    from svdyn.report import RunReport

    rel, text = _load(file)
    search = find_cycles(rel, period, budget)
    run = RunReport.for_input(str(file), text)
    run.results.update(
        period=period,
        complete=search.complete,
        explored=search.explored,
        count=len(search.cycles),
        cycles=search.cycles,
    )
    _show(run, as_json)


@main.command()
@click.argument("m", type=click.IntRange(min=1))
@click.argument("n", type=click.IntRange(min=1))
def sarkovskii(m, n):
    """Print whether M comes before N in the Sarkovskii order."""
    from svdyn.dynamics import sarkovskii_precedes

    click.echo("true" if sarkovskii_precedes(m, n) else "false")


@main.command()
@click.argument("file", type=FILE)
@click.option("--period", type=click.IntRange(min=1), required=True, help="Period n of a known cycle")
@click.option("--max", "max_m", type=click.IntRange(min=1), required=True, help="Largest period to look for")
@click.option("--budget", type=click.IntRange(min=1), help="Maximum piece sequences per period")
@click.option("--assert", "assert_", is_flag=True, default=False, help="Exit 1 on a violation")
@click.option("--json", "as_json", is_flag=True, default=False)
@exits_on_error
def span(file, period, max_m, budget, assert_, as_json):
    """Check that a period-n cycle forces every later period up to --max."""
    from svdyn.dynamics import verify_sarkovskii_span
    from svdyn.report import RunReport

    rel, text = _load(file)
    report = verify_sarkovskii_span(rel, period, max_m, budget)
    run = RunReport.for_input(str(file), text)
    run.results["period"] = period
    for m, status in report.statuses.items():
        example = report.examples.get(m)
        run.results[f"m={m}"] = f"{status} {example}" if example else status
    run.results["ok"] = report.ok
    _show(run, as_json)
    if assert_ and not report.ok:
        sys.exit(EXIT_ASSERTION)


@main.command()
@click.argument("first", type=FILE)
@click.argument("then", type=FILE)
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path))
@exits_on_error
def compose(first, then, output):
    """Apply FIRST, then THEN."""
    from svdyn.relation import compose as compose_relations

    _emit(compose_relations(_load(first)[0], _load(then)[0]), output)


@main.command()
@click.argument("file", type=FILE)
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path))
@exits_on_error
def transpose(file, output):
    """Swap coordinates, giving the inverse relation."""
    from svdyn.relation import transpose as transpose_relation

    _emit(transpose_relation(_load(file)[0]), output)


@main.command()
@click.argument("file", type=FILE)
@click.option("--x", "xs", required=True, help="Interval I as LO,HI")
@click.option("--y", "ys", required=True, help="Interval J as LO,HI")
@click.option("--rescale", is_flag=True, default=False, help="Map I x J onto the unit square")
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path))
@exits_on_error
def restrict(file, xs, ys, rescale, output):
    """Restrict to I x J; every x in I must keep a value in J."""
    from svdyn.relation import restrict as restrict_relation

    _emit(restrict_relation(_load(file)[0], _interval(xs), _interval(ys), rescale=rescale), output)


@main.command()
@click.argument("file", type=FILE)
@click.option("--depth", type=click.IntRange(min=1), required=True)
@click.option("--connected", is_flag=True, default=False, help="Decide connectedness")
@click.option("--fissile", is_flag=True, default=False, help="Report the fissile cell diagnostic")
@click.option("--assert", "assert_", is_flag=True, default=False, help="Exit 1 when disconnected")
@click.option("--json", "as_json", is_flag=True, default=False)
@exits_on_error
def truncate(file, depth, connected, fissile, assert_, as_json):
    """Build the depth-N truncation of the inverse limit."""
    from svdyn.mahavier import build_truncation, fissile_cell_diagnostic
    from svdyn.report import RunReport

    if assert_ and not connected:
        raise click.UsageError("--assert needs --connected")
    rel, text = _load(file)
    complex_ = build_truncation(rel, depth)
    run = RunReport.for_input(str(file), text)
    run.results.update(depth=depth, cells=len(complex_))
    is_connected = True
    if connected:
        components = complex_.components()
        is_connected = components <= 1
        run.results.update(connected=is_connected, components=components)
    if fissile:
        diagnostic = fissile_cell_diagnostic(rel, complex_)
        run.results.update(fissile_fraction=diagnostic.fraction, fissile_cells=list(diagnostic.cells))
    _show(run, as_json)
    if assert_ and not is_connected:
        sys.exit(EXIT_ASSERTION)


@main.command()
@click.argument("file", type=FILE)
@click.option("--cycle", "points", required=True, help="Cycle points as x0,x1,...")
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path))
@exits_on_error
def desingularize(file, points, output):
    """Replace the fat part of the graph by a light path that keeps a cycle."""
    from svdyn.constructions import desingularize as build

    _emit(build(_load(file)[0], _rationals(points)), output)


@main.command()
@click.argument("file", type=FILE)
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.option("--depth", type=click.IntRange(min=1), help="Plot a truncation of this depth instead")
@click.option("--coords", default="0,1", show_default=True, help="Truncation coordinates I,J to project on")
@exits_on_error
def plot(file, output, depth, coords):
    """Draw the graph, or a 2-coordinate projection of a truncation, as SVG."""
    from svdyn.mahavier import build_truncation
    from svdyn.plot import write_svg

    rel, _ = _load(file)
    title = file.name
    if depth is not None:
        try:
            i, j = (int(part) for part in coords.split(","))
        except ValueError:
            raise click.BadParameter(f"expected I,J, got {coords!r}", param_hint="--coords")
        rel = build_truncation(rel, depth).projection(i, j)
        title = f"{file.name} depth {depth} (x{i}, x{j})"
    write_svg(rel, output, title)
    click.echo(f"Wrote {output}")


@main.command()
@click.argument("name", required=False)
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path))
@exits_on_error
def corpus(name, output):
    """Write a named example relation; without NAME, list the names."""
    from svdyn.constructions import corpus as named, corpus_names

    if name is None:
        for known in corpus_names():
            click.echo(known)
        return
    _emit(named(name), output)


@main.command()
@click.argument("file", type=FILE)
@click.option("--max-depth", type=click.IntRange(min=1), default=8, show_default=True)
@click.option("--json", "as_json", is_flag=True, default=False)
@exits_on_error
def organic(file, max_depth, as_json):
    """Look for interior points reaching 0 and 1 under iteration."""
    from svdyn.dynamics import organic_sufficient
    from svdyn.report import RunReport

    rel, text = _load(file)
    result = organic_sufficient(rel, max_depth)
    run = RunReport.for_input(str(file), text)
    run.results.update(status=result.status, p=result.p, r=result.r, q=result.q, s=result.s)
    _show(run, as_json)


@main.command()
@click.argument("file", type=FILE)
@click.option("--x", "xs", required=True, help="Backward trajectory x0,x1,...,xN")
@click.option("--y", "ys", required=True, help="Backward trajectory y0,y1,...,yN")
@click.option("--assert", "assert_", is_flag=True, default=False, help="Exit 1 unless level 0 is [0, 1]")
@click.option("--json", "as_json", is_flag=True, default=False)
@exits_on_error
def jtower(file, xs, ys, assert_, as_json):
    """Interval tower J_k built from two backward trajectories."""
    from svdyn.dynamics import j_tower
    from svdyn.report import RunReport

    rel, text = _load(file)
    tower = j_tower(rel, _rationals(xs), _rationals(ys))
    run = RunReport.for_input(str(file), text)
    run.results["depth"] = tower.depth
    for k, level in enumerate(tower.levels):
        run.results[f"J{k}"] = level
    run.results.update(nested=tower.nested, full_at_zero=tower.full_at_zero)
    _show(run, as_json)
    if assert_ and not tower.full_at_zero:
        sys.exit(EXIT_ASSERTION)


@main.command("check-all")
@click.argument("directory", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--db", "db_url", help="Database URL (default: DATABASE_URL)")
@click.option("--force", is_flag=True, default=False, help="Re-check files whose content is unchanged")
def check_all(directory, db_url, force):
    """Classify every .plrel file in DIRECTORY, skipping files already checked."""
    from sqlalchemy.orm import sessionmaker

    from svdyn.classify import classify
    from svdyn.db import get_engine, is_fresh, upsert_check_log
    from svdyn.models import Base
    from svdyn.plrel import parse, read_text
    from svdyn.report import RunReport, add_properties, content_hash

    click.echo("--- Step 0: Ensuring database tables exist ---")
    engine = get_engine(db_url)
    Base.metadata.create_all(engine)

    click.echo(f"--- Step 1: Scanning {directory} ---")
    files = sorted(directory.glob("*.plrel"))
    if not files:
        click.echo("No .plrel files found.")
        return
    click.echo(f"Found {len(files)} files to check")

    click.echo("--- Step 2: Classifying with freshness detection ---")
    session_factory = sessionmaker(bind=engine)
    checked = skipped = failed = 0
    for path in files:
        try:
            text = read_text(path)
        except (SvdynError, OSError) as e:
            logger.warning(f"{path}: {e}")
            click.echo(f"  Failed {path.name}: {e}")
            failed += 1
            continue
        digest = content_hash(text)
        with session_factory() as session:
            if not force and is_fresh(session, str(path), digest):
                click.echo(f"  {path.name}: unchanged, skipping")
                skipped += 1
                continue
            try:
                report = classify(parse(text))
            except InvariantError:
                raise
            except SvdynError as e:
                logger.warning(f"{path}: {e}")
                click.echo(f"  Failed {path.name}: {e}")
                failed += 1
                continue
            run = add_properties(RunReport.for_input(str(path), text), report)
            upsert_check_log(session, str(path), digest, report, run.render_json())
            session.commit()
            click.echo(f"  {path.name}: ivp={'n/a' if report.ivp is None else str(report.ivp).lower()}")
            checked += 1

    click.echo("--- Step 3: Batch complete ---")
    click.echo(f"Summary: {checked} files checked, {skipped} skipped (unchanged), {failed} failed")
