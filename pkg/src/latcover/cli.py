"""Command-line entry point (``latcover``)."""

from __future__ import annotations

import json
import sys

import click

from . import harness
from .cover import (
    covering_number_exact,
    covering_number_greedy,
    enumerate_min_decompositions,
    independence_exact,
    independence_greedy,
)
from .errors import LatcoverError
from .io import load_instance
from .lattice import is_antichain
from .restrictions import restrict_linear, restrict_offdiagonal, restrict_same_cover
from .subspaces import parse_family
from .tensors import load_tensor, slice_rank_antichain, slice_rank_oracle, support


def _fmt(v) -> str:
    return v if isinstance(v, str) else json.dumps(v, default=str)


def emit(ctx: click.Context, record: dict) -> None:
    if ctx.obj["json"]:
        click.echo(json.dumps(record, default=str, sort_keys=True))
    else:
        click.echo(" ".join(f"{k}={_fmt(v)}" for k, v in record.items()))


def _shape(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise click.BadParameter(f"expected comma-separated sizes, got {text!r}")


class _Group(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except (LatcoverError, ValueError, OSError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)


@click.group(cls=_Group)
@click.option("--json", "as_json", is_flag=True, help="Emit one JSON object per record.")
@click.pass_context
def main(ctx, as_json):
    """Exact covering numbers of lattice subsets by coordinate subspaces."""
    ctx.ensure_object(dict)
    ctx.obj["json"] = as_json


input_opt = click.option("--input", "path", required=True, type=click.Path(exists=True, dir_okay=False))
family_opt = click.option("--family", "family", default="slices", show_default=True,
                          help="slices, points, lines, full, inline JSON or a JSON file.")


@main.command()
@input_opt
@family_opt
@click.option("--exact/--greedy", default=True, help="Exact branch and bound (default) or greedy upper bound.")
@click.option("--enumerate", "enum", is_flag=True, help="Also list minimal decompositions.")
@click.option("--cap", default=20, show_default=True, help="Maximum decompositions to list.")
@click.pass_context
def cover(ctx, path, family, exact, enum, cap):
    """Covering number of an instance."""
    A = load_instance(path)
    M = parse_family(family, A.d)
    res = covering_number_exact(A, M) if exact else covering_number_greedy(A, M)
    emit(ctx, {"command": "cover", **res.to_dict()})
    if enum:
        emit(ctx, {"command": "decomps", **enumerate_min_decompositions(A, M, cap).to_dict()})


@main.command()
@input_opt
@family_opt
@click.option("--exact", is_flag=True, help="Exact maximum independent set instead of the greedy one.")
@click.pass_context
def independence(ctx, path, family, exact):
    """Independence number (exact) or greedy independent set."""
    A = load_instance(path)
    M = parse_family(family, A.d)
    res = independence_exact(A, M) if exact else independence_greedy(A, M)
    emit(ctx, {"command": "independence", **res.to_dict()})


@main.command()
@input_opt
@family_opt
@click.option("--cap", default=100, show_default=True, help="Maximum decompositions to list.")
@click.pass_context
def decomps(ctx, path, family, cap):
    """Count and list ordered minimal decompositions."""
    A = load_instance(path)
    M = parse_family(family, A.d)
    emit(ctx, {"command": "decomps", **enumerate_min_decompositions(A, M, cap).to_dict()})


@main.command()
@input_opt
@family_opt
@click.option("--theorem", required=True, type=click.Choice(["linear", "offdiag", "same-cover"]))
@click.option("--l", "l", type=int, default=None, help="Target; defaults to the largest the hypothesis allows.")
@click.option("--seed", type=int, default=None, help="Use a seeded random colouring (offdiag only).")
@click.option("--emit-tree", type=click.Path(dir_okay=False), default=None, help="Write the descent tree as JSON.")
@click.pass_context
def restrict(ctx, path, family, theorem, l, seed, emit_tree):
    """Extract a restriction that keeps the covering number large."""
    from .lattice import off_diagonal_part

    A = load_instance(path)
    M = parse_family(family, A.d)
    tree = None
    if theorem == "linear":
        if l is None:
            l = covering_number_exact(A, M).value // len(M)
        cert = restrict_linear(A, M, l)
    elif theorem == "offdiag":
        if l is None:
            l = covering_number_exact(off_diagonal_part(A), M).value // (A.d**A.d * len(M))
        method = "derandomized" if seed is None else "sampled"
        cert = restrict_offdiagonal(A, M, l, method=method, seed=seed)
    else:
        cert, tree = restrict_same_cover(A, M, l)
    emit(ctx, {"command": "restrict", **cert.to_dict()})
    if emit_tree:
        if tree is None:
            raise click.UsageError("--emit-tree only applies to --theorem same-cover")
        with open(emit_tree, "w") as fh:
            json.dump(tree.to_dict(), fh, indent=1)


@main.command()
@input_opt
@click.option("--oracle", "mode", flag_value="oracle", help="Exhaustive split search.")
@click.option("--bridge", "mode", flag_value="bridge", help="Slice covering number of an antichain support.")
@click.pass_context
def slicerank(ctx, path, mode):
    """Slice rank of a tensor file. Without a flag, antichain supports use the bridge."""
    T = load_tensor(path)
    if mode is None:
        mode = "bridge" if T.d >= 2 and is_antichain(support(T)) else "oracle"
    res = slice_rank_antichain(T) if mode == "bridge" else slice_rank_oracle(T)
    emit(ctx, {"command": "slicerank", **res.to_dict()})


def _frame(kind, shape, density, count, seed, max_points=None) -> harness.GeneratorSpec:
    return harness.GeneratorSpec(kind, shape, density, count, seed, max_points)


frame_opts = [
    click.option("--shape", required=True, help="Comma-separated side lengths, e.g. 3,3,3."),
    click.option("--kind", default="random", show_default=True,
                 type=click.Choice(["exhaustive", "random", "diagonal", "antichain"])),
    click.option("--density", default=0.3, show_default=True),
    click.option("--count", default=100, show_default=True),
    click.option("--max-points", type=int, default=None),
    click.option("--seed", default=0, show_default=True),
    click.option("--budget", type=int, default=None, help="Work budget (default $LATCOVER_BUDGET or 10^6)."),
]


def with_frame(f):
    for opt in reversed(frame_opts):
        f = opt(f)
    return f


@main.command()
@click.option("--suite", required=True, type=click.Choice(sorted(harness.SUITES) + ["all"]))
@click.option("--family", "families", multiple=True, default=["slices"], show_default=True,
              help="Repeatable; every suite runs against each family.")
@click.option("--p", default=2, show_default=True, help="Field size for the sawin-tao suite.")
@with_frame
@click.pass_context
def verify(ctx, suite, families, p, shape, kind, density, count, max_points, seed, budget):
    """Run theorem-verification suites; exits 1 if any violation is found."""
    shape = _shape(shape)
    fams = [parse_family(f, len(shape)) for f in families]
    gen = _frame(kind, shape, density, count, seed, max_points)
    budget = budget or harness.DEFAULT_BUDGET
    names = sorted(harness.SUITES) if suite == "all" else [suite]
    reports = [harness.verify_suite(n, gen, fams, seed, budget, p) for n in names]
    for r in reports:
        click.echo(json.dumps(r.to_dict(), default=str, sort_keys=True) if ctx.obj["json"] else r.to_text())
    if any(r.violations for r in reports):
        sys.exit(1)


@main.command("search-c")
@family_opt
@with_frame
@click.pass_context
def search_c(ctx, family, shape, kind, density, count, max_points, seed, budget):
    """Smallest independence-to-covering ratio over a frame."""
    shape = _shape(shape)
    M = parse_family(family, len(shape))
    gen = _frame(kind, shape, density, count, seed, max_points)
    res = harness.search_constant(M, gen, budget or harness.DEFAULT_BUDGET)
    emit(ctx, {"command": "search-c", "frame": gen.describe(), **res.to_dict()})


@main.command()
@family_opt
@click.option("--v", "full_value", required=True, type=int, help="Required covering number of A.")
@click.option("--s", "cap_size", required=True, type=int, help="Side cap of the restrictions.")
@click.option("--r", "restricted_cap", required=True, type=int, help="Maximum allowed restricted value.")
@with_frame
@click.pass_context
def hunt(ctx, family, full_value, cap_size, restricted_cap, shape, kind, density, count, max_points, seed, budget):
    """Look for instances whose small restrictions all lose covering number."""
    shape = _shape(shape)
    M = parse_family(family, len(shape))
    gen = _frame(kind, shape, density, count, seed, max_points)
    res = harness.counterexample_hunt(M, gen, full_value, cap_size, restricted_cap,
                                      budget or harness.DEFAULT_BUDGET)
    emit(ctx, {"command": "hunt", "frame": gen.describe(), **res.to_dict()})


if __name__ == "__main__":
    main()
