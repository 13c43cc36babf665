"""Command-line interface: ``pfxcomplex <subcommand> [flags]``.

Exit codes: 0 all tight / valid, 2 untight row or failed check, 3 missing
fixture, 4 usage or input error.
"""

from __future__ import annotations

import csv
import io as _io
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import click

from . import bounds, io
from .automata import AutomatonError, Dfa, Nfa, determinize, is_prefix_free, to_min_dfa
from .complexity import (
    DEFAULT_BUDGET,
    FoolingCertificate,
    find_extended_certificate,
    find_fooling_set,
    measure,
    reachable_subsets,
    verify_certificate,
)
from . import constructions as C
from .search import (
    SearchSpec,
    extremal_search,
    fill_template,
    search_complement_base,
    search_reversal_base,
)
from .witnesses import (
    FAMILIES,
    SEARCHED,
    UnavailableError,
    cyclic_shift_partial_witness,
    fixture_name,
    make_witness,
    populate_fixtures,
)

EXIT_OK, EXIT_UNTIGHT, EXIT_UNAVAILABLE, EXIT_USAGE = 0, 2, 3, 4


@dataclass(frozen=True)
class Config:
    fixtures: str | None = None
    fmt: str = "csv"
    workers: int = 1
    budget: int = DEFAULT_BUDGET
    seed: int = 0


def emit(records: list[dict], fmt: str) -> None:
    if fmt == "json":
        click.echo(json.dumps(records, indent=1))
        return
    keys = list(records[0]) if records else []
    if fmt == "md":
        click.echo("| " + " | ".join(keys) + " |")
        click.echo("|" + "---|" * len(keys))
        for r in records:
            click.echo("| " + " | ".join("" if r[k] is None else str(r[k]) for k in keys) + " |")
        return
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(keys)
    for r in records:
        w.writerow(["" if r[k] is None else r[k] for k in keys])
    click.echo(buf.getvalue(), nl=False)


def parse_range(text: str) -> list[int]:
    """``3..5``, ``3,4,7`` or ``4``."""
    out: list[int] = []
    try:
        for part in text.split(","):
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise click.BadParameter(f"expected a range like 3..5 or a list like 3,4, got {text!r}") from None
    if not out:
        raise click.BadParameter("empty range")
    return out


class _Cli(click.Group):
    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            rv = super().main(args, prog_name or "pfxcomplex", complete_var, standalone_mode=False, **extra)
        except click.UsageError as exc:
            exc.show()
            sys.exit(EXIT_USAGE)
        except click.ClickException as exc:
            exc.show()
            sys.exit(exc.exit_code)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(1)
        sys.exit(rv if isinstance(rv, int) else EXIT_OK)


def _fail(exc: Exception) -> int:
    click.echo(f"error: {exc}", err=True)
    return EXIT_UNAVAILABLE if isinstance(exc, UnavailableError) else EXIT_USAGE


@click.group(cls=_Cli, context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--fixtures", type=click.Path(file_okay=False), default=None, help="Fixture directory.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "md"]), default="csv", show_default=True)
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--budget", type=click.IntRange(min=1), default=DEFAULT_BUDGET, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.pass_context
def cli(ctx, fixtures, fmt, workers, budget, seed):
    """State complexity workbench for prefix-free regular languages."""
    ctx.obj = Config(fixtures, fmt, workers, budget, seed)


main = cli


# ---------------------------------------------------------------------------
# verify-bounds
# ---------------------------------------------------------------------------


@cli.command("verify-bounds")
@click.option("--ops", default=",".join(bounds.OPERATIONS), show_default=False, help="Comma-separated operations (default: all).")
@click.option("--m", "m_range", default="3..8", show_default=True)
@click.option("--n", "n_range", default="3..8", show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def verify_bounds_cmd(cfg: Config, ops, m_range, n_range, output):
    """Tabulate constructed and minimized sizes against the bound formulas."""
    names = [o.strip() for o in ops.split(",") if o.strip()]
    unknown = [o for o in names if o not in bounds.OPERATIONS]
    if unknown:
        raise click.BadParameter(f"unknown operations {unknown}; known: {', '.join(bounds.OPERATIONS)}", param_hint="--ops")
    rows = bounds.verify_bounds(names, parse_range(m_range), parse_range(n_range), cfg.fixtures, cfg.workers)
    text = bounds.render(rows, cfg.fmt)
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)
    return bounds.exit_status(rows)


# ---------------------------------------------------------------------------
# op
# ---------------------------------------------------------------------------

UNARY_OPS = {
    "star": C.dfa_star_prefix_free,
    "reverse": C.dfa_reverse,
    "cyclic-shift": C.dfa_cyclic_shift,
    "determinize": lambda a: determinize(a, merge_finals=is_prefix_free(a)),
    "minimize": to_min_dfa,
    "augment-reversal": C.augment_reversal_witness,
    "nfa-complement": C.nfa_complement_prefix_free,
    "nfa-reverse": C.nfa_reverse,
    "nfa-star": C.nfa_star,
    "nfa-cyclic-shift": C.nfa_cyclic_shift,
}
BINARY_OPS = {
    "intersection": lambda k, l: C.dfa_bool(k, l, "intersection"),
    "union": lambda k, l: C.dfa_bool(k, l, "union"),
    "symmetric-difference": lambda k, l: C.dfa_bool(k, l, "symmetric-difference"),
    "difference": lambda k, l: C.dfa_bool(k, l, "difference"),
    "concat": C.dfa_concat_prefix_free,
    "nfa-union": C.nfa_union,
    "nfa-intersection": C.nfa_intersection,
    "nfa-difference": C.nfa_difference,
    "nfa-concat": C.nfa_concat,
}
RAW_OPS = {
    "intersection": lambda k, l: C.dfa_bool(k, l, "intersection", minimal=False),
    "union": lambda k, l: C.dfa_bool(k, l, "union", minimal=False),
    "symmetric-difference": lambda k, l: C.dfa_bool(k, l, "symmetric-difference", minimal=False),
    "difference": lambda k, l: C.dfa_bool(k, l, "difference", minimal=False),
    "cyclic-shift": lambda d: C.dfa_cyclic_shift(d, minimal=False),
}


def _operands(files) -> list:
    out = []
    for f in files:
        out.extend(io.read_automata(f))
    return out


@cli.command("op")
@click.argument("operation", type=click.Choice(sorted(UNARY_OPS) + sorted(BINARY_OPS)))
@click.argument("files", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None, help="Write the result here.")
@click.option("--raw", is_flag=True, help="Skip the final minimization where the construction has one.")
@click.pass_obj
def op_cmd(cfg: Config, operation, files, output, raw):
    """Apply a construction to automaton files (a two-line file counts as two operands)."""
    try:
        args = _operands(files)
        arity = 2 if operation in BINARY_OPS else 1
        if len(args) != arity:
            raise click.UsageError(f"{operation} takes {arity} automata, got {len(args)}")
        table = RAW_OPS if raw and operation in RAW_OPS else {**UNARY_OPS, **BINARY_OPS}
        res = table[operation](*args)
    except AutomatonError as exc:
        return _fail(exc)
    if output:
        io.write_automaton(res, output)
        emit(
            [{"operation": operation, "type": "dfa" if isinstance(res, Dfa) else "nfa", "states": res.n, "output": output}],
            cfg.fmt,
        )
    else:
        click.echo(io.dumps(res))
    return EXIT_OK


# ---------------------------------------------------------------------------
# measure / fooling
# ---------------------------------------------------------------------------


@cli.command("measure")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--cert", "certs", multiple=True, type=click.Path(exists=True, dir_okay=False), help="Certificate file(s).")
@click.option("--brute-cap", type=click.IntRange(min=0), default=0, show_default=True, help="Run the exhaustive nsc oracle up to this size.")
@click.option("--subsets", is_flag=True, help="Also count reachable subsets of the plain subset construction.")
@click.pass_obj
def measure_cmd(cfg: Config, file, certs, brute_cap, subsets):
    """Report sc and the certified nsc interval of each automaton in FILE."""
    try:
        machines = io.read_automata(file)
        cert_objs = [io.read_certificate(c) for c in certs]
        records = []
        for a in machines:
            upper = a.n if isinstance(a, Nfa) else None
            r = measure(a, upper=upper, certificates=cert_objs, brute_cap=brute_cap, budget=cfg.budget)
            rec = {
                "type": "dfa" if isinstance(a, Dfa) else "nfa",
                "states": a.n,
                "prefix_free": is_prefix_free(a),
                "sc": r.sc,
                "nsc_lower": r.nsc_lower,
                "nsc_upper": r.nsc_upper,
                "nsc_exact": r.nsc_exact,
            }
            if subsets:
                rec["reachable_subsets"] = reachable_subsets(a)
            records.append(rec)
    except AutomatonError as exc:
        return _fail(exc)
    emit(records, cfg.fmt)
    return EXIT_OK


@cli.command("fooling")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.argument("cert", required=False, type=click.Path(exists=True, dir_okay=False))
@click.option("--find", "find_out", type=click.Path(dir_okay=False), default=None, help="Search a certificate and write it here.")
@click.pass_obj
def fooling_cmd(cfg: Config, file, cert, find_out):
    """Verify CERT against the language of FILE, or search one with --find."""
    try:
        lang = io.read_automaton(file)
        if cert is None and find_out is None:
            raise click.UsageError("give a certificate file or --find OUT")
        if find_out is not None:
            c = FoolingCertificate(tuple(find_fooling_set(lang)))
            ext = find_extended_certificate(lang)
            if ext is not None and ext.claimed_bound > c.claimed_bound:
                c = ext
            io.write_certificate(c, find_out)
        else:
            c = io.read_certificate(cert)
        v = verify_certificate(c, to_min_dfa(lang))
    except AutomatonError as exc:
        return _fail(exc)
    emit([{"valid": v.ok, "bound": v.bound, "extended": c.extension is not None, "violation": v.violation}], cfg.fmt)
    return EXIT_OK if v.ok else EXIT_UNTIGHT


# ---------------------------------------------------------------------------
# search
# ---------------------------------------------------------------------------


@cli.command("search")
@click.option("--kind", type=click.Choice(["dfa", "nfa"]), default="dfa", show_default=True)
@click.option(
    "--op",
    "operation",
    required=True,
    help="reversal, cyclic-shift, nfa-to-dfa, nfa-cyclic-shift, intersection/union/symmetric-difference/difference, "
    "reversal-base, complement-base or template-cyclic-shift.",
)
@click.option("--n", type=click.IntRange(min=1), required=True)
@click.option("--m", type=click.IntRange(min=1), default=None)
@click.option("--k", type=click.IntRange(min=1, max=16), default=2, show_default=True)
@click.option("--mode", type=click.Choice(["exhaustive", "sampled"]), default="exhaustive", show_default=True)
@click.option("--samples", type=click.IntRange(min=1), default=1000, show_default=True)
@click.option("--target", type=int, default=None)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None, help="Write witnesses and outcome JSON here.")
@click.pass_obj
def search_cmd(cfg: Config, kind, operation, n, m, k, mode, samples, target, out_dir):
    """Maximize the result size of an operation over small prefix-free machines."""
    try:
        if operation == "reversal-base":
            o = search_reversal_base(n, k, budget=cfg.budget, workers=cfg.workers)
        elif operation == "complement-base":
            o = search_complement_base(n, k, budget=cfg.budget)
        elif operation == "template-cyclic-shift":
            tgt = target if target is not None else (2 * n - 3) ** (n - 2)
            o = fill_template(cyclic_shift_partial_witness(n), "cyclic-shift", tgt, cfg.budget, cfg.workers)
        else:
            spec = SearchSpec(
                kind, n, k, operation, m=m, target=target, budget=cfg.budget, mode=mode,
                samples=samples, seed=cfg.seed, workers=cfg.workers, stop_at_target=target is not None and mode == "sampled",
            )
            o = extremal_search(spec)
    except (AutomatonError, ValueError) as exc:
        return _fail(exc)
    files = []
    if out_dir:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        stem = f"{operation}-k{k}-m{m or 0}-n{n}"
        if o.witnesses:
            files.append(f"{stem}.json")
            io.write_automata(o.witnesses, out / files[0])
        (out / f"{stem}.outcome.json").write_text(json.dumps(o.to_json(files), indent=1) + "\n")
    rec = o.to_json(files if files else [io.dumps(w) for w in o.witnesses])
    rec["examined"] = o.examined
    if cfg.fmt == "json":
        click.echo(json.dumps(rec, indent=1))
    else:
        emit([{**rec, "witnesses": ";".join(rec["witnesses"])}], cfg.fmt)
    if o.target is not None and not o.reached:
        return EXIT_UNTIGHT
    return EXIT_OK


# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------


@cli.group("fixtures")
def fixtures_grp():
    """List, show and populate witness fixtures."""


@fixtures_grp.command("list")
@click.pass_obj
def fixtures_list(cfg: Config):
    rows = [
        {"family": f.id, "operands": f.arity, "kind": f.kind, "provenance": f.provenance, "domain": f.domain}
        for f in FAMILIES.values()
    ]
    emit(rows, cfg.fmt)
    return EXIT_OK


@fixtures_grp.command("show")
@click.argument("family", type=click.Choice(sorted(FAMILIES)))
@click.option("--m", type=int, default=None)
@click.option("--n", type=int, required=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def fixtures_show(cfg: Config, family, m, n, output):
    """Generate a witness and print it (or write it with -o)."""
    try:
        w = make_witness(family, m, n, cfg.fixtures)
    except AutomatonError as exc:
        return _fail(exc)
    machines = list(w) if isinstance(w, tuple) else [w]
    if output:
        io.write_automata(machines, output)
    else:
        for a in machines:
            click.echo(io.dumps(a))
    return EXIT_OK


@fixtures_grp.command("populate")
@click.option("--family", "families", multiple=True, type=click.Choice(SEARCHED), help="Slot(s) to populate (default: all).")
@click.option("--samples", type=click.IntRange(min=1), default=2000, show_default=True)
@click.pass_obj
def fixtures_populate(cfg: Config, families, samples):
    """Run the searches behind searched slots and write fixture files."""
    try:
        populate_fixtures(
            cfg.fixtures, families or None, workers=cfg.workers, seed=cfg.seed, samples=samples,
            # searched slots need more than the default enumeration budget
            budget=max(cfg.budget, 10**9), log=lambda s: click.echo(s, err=True),
        )
    except AutomatonError as exc:
        return _fail(exc)
    return EXIT_OK


@fixtures_grp.command("name")
@click.argument("family")
@click.option("--m", type=int, default=None)
@click.option("--n", type=int, required=True)
def fixtures_name(family, m, n):
    """Print the fixture file name for (family, m, n)."""
    click.echo(fixture_name(family, m, n))
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    cli()
