"""The spart command-line interface."""
import json
from functools import reduce
from typing import List, Optional

import click

from . import __version__, cache, config
from .category import (
    TruncatedClosure,
    category_from_json,
    category_to_json,
    closure,
    contains,
    duality_pairs_all,
    load_category,
    merge_categories,
    save_category,
    sigma_of,
)
from .functors import FlatSignature, flat_apply, flat_preimage, perm_apply
from .notation import (
    echo_partition,
    format_partition,
    load_partitions,
    parse_partition,
    partition_to_json,
    render_ascii,
)
from .partition import (
    ROTATIONS,
    Grading,
    LevelMismatch,
    PartitionError,
    Permutation,
    SpatialPartition,
    compose as compose_parts,
    involution,
    rotate as rotate_part,
    tensor as tensor_parts,
)
from .presets import all_presets, load_preset
from .relations import emit_presentation, projective_generators, projective_presentation
from .tensors import gram_rank as gram_rank_of, verify_ops_laws


def _partition_arg(ctx, param, value):
    if value is None:
        return None
    return parse_partition(value)


def _grading_arg(ctx, param, value):
    if value is None:
        return None
    return Grading.parse(value)


def _permutation_arg(ctx, param, value):
    if value is None:
        return None
    return Permutation.parse(value)


def _collect(texts, file: Optional[str], preset: Optional[str] = None) -> List[SpatialPartition]:
    parts = [parse_partition(t) for t in texts]
    if file:
        parts += load_partitions(file)
    if preset:
        parts += load_preset(preset).with_identity()
    return parts


def _progress(message: str):
    if click.get_current_context().find_root().obj.get("verbose"):
        click.secho(f"> {message}", dim=True, err=True)


def _cached_closure(generators, m, bound, threads, use_cache, strict, max_rounds=None):
    key = config.CLOSURE_CACHE_PREFIX + cache.digest(
        {"m": m, "bound": bound, "generators": [partition_to_json(g) for g in generators]}
    )
    cat = None
    if use_cache and max_rounds is None:
        stored = cache.get(key)
        if stored is not None:
            _progress("reusing cached closure")
            cat = category_from_json(stored)
    if cat is None:
        verbose = click.get_current_context().find_root().obj.get("verbose")
        cat = closure(generators, m, bound, max_rounds, threads, verbose)
        if use_cache and cat.closed:
            cache.store(key, category_to_json(cat))
    if cat.truncated:
        if strict:
            raise TruncatedClosure("closure stopped before reaching a fixed point")
        click.secho("warning: closure is truncated", fg="yellow", err=True)
    return cat


json_option = click.option("--json", "as_json", is_flag=True, help="Emit JSON.")
art_option = click.option(
    "--ascii-art", "art", is_flag=True, help="Draw the partition level by level."
)


#### $ spart ####
@click.group()
@click.option("--verbose", is_flag=True, help="Print progress to stderr.")
@click.pass_context
def spart(ctx, verbose):
    """Colored spatial partitions and their quantum group presentations."""
    ctx.obj = {"verbose": config.get_default("verbose", True if verbose else None)}


#### $ spart version ####
@click.command()
def version():
    """Echo version and done"""
    click.echo(f"spart {__version__}")


#### $ spart config ####
@click.group("config")
def config_():
    """Manage persisted defaults."""


#### $ spart config set ####
@click.command("set")
@click.argument("key", type=click.Choice(sorted(config.DEFAULTS)))
@click.argument("value")
def set_default(key, value):
    """Persist a default value."""
    try:
        config.set_default(key, value)
    except ValueError as e:
        raise click.BadParameter(str(e), param_hint="value")
    click.echo(f"Updated {key} to {config.get_default(key)}")


#### $ spart config get ####
@click.command("get")
@click.argument("key", type=click.Choice(sorted(config.DEFAULTS)))
def get_default(key):
    """Show the value in effect."""
    click.echo(config.get_default(key))


#### $ spart canon ####
@click.command()
@click.argument("partition", callback=_partition_arg)
@json_option
@art_option
def canon(partition, as_json, art):
    """Print the canonical form of a partition."""
    echo_partition(partition, as_json, art)


#### $ spart compose ####
@click.command()
@click.argument("p", callback=_partition_arg)
@click.argument("q", callback=_partition_arg)
@click.option("--n", "grading", callback=_grading_arg, help="Grading for the loop factor.")
@json_option
@art_option
def compose(p, q, grading, as_json, art):
    """Compose p with q on top; the lower row of q must match the upper row of p."""
    pq, loops = compose_parts(p, q)
    if as_json:
        obj = {"partition": partition_to_json(pq), "loops": len(loops)}
        if grading:
            obj["factor"] = loops.factor(grading)
        click.echo(json.dumps(obj))
        return
    echo_partition(pq, False, art)
    click.echo(f"loops: {len(loops)}")
    if grading:
        click.echo(f"factor: {loops.factor(grading)}")


#### $ spart tensor ####
@click.command()
@click.argument("p", callback=_partition_arg)
@click.argument("q", callback=_partition_arg)
@json_option
@art_option
def tensor(p, q, as_json, art):
    """Place q to the right of p."""
    echo_partition(tensor_parts(p, q), as_json, art)


#### $ spart involute ####
@click.command()
@click.argument("p", callback=_partition_arg)
@json_option
@art_option
def involute(p, as_json, art):
    """Reflect a partition, swapping its rows."""
    echo_partition(involution(p), as_json, art)


#### $ spart rotate ####
@click.command()
@click.argument("p", callback=_partition_arg)
@click.option("--side", type=click.Choice(ROTATIONS), default="lower-left", show_default=True)
@json_option
@art_option
def rotate(p, side, as_json, art):
    """Move a boundary column to the other row."""
    echo_partition(rotate_part(p, side), as_json, art)


#### $ spart perm ####
@click.command()
@click.argument("p", callback=_partition_arg)
@click.option("--sigma", required=True, callback=_permutation_arg, help="Like [2,1].")
@click.option("--tau", callback=_permutation_arg, help="Defaults to sigma.")
@json_option
@art_option
def perm(p, sigma, tau, as_json, art):
    """Permute levels: sigma on white points, tau on black points."""
    echo_partition(perm_apply(sigma, tau or sigma, p), as_json, art)


def _signature(p_levels: int, z: str, source: bool) -> FlatSignature:
    if source:
        if not z or p_levels % len(z):
            raise LevelMismatch(f"{p_levels} levels cannot be flattened along '{z}'")
        return FlatSignature.of(p_levels // len(z), z)
    return FlatSignature.of(p_levels, z)


#### $ spart flat ####
@click.command()
@click.argument("p", callback=_partition_arg)
@click.option("--z", required=True, help="Flattening word, like wb.")
@json_option
@art_option
def flat(p, z, as_json, art):
    """Flatten m*|z| levels onto m levels."""
    echo_partition(flat_apply(_signature(p.m, z, True), p), as_json, art)


#### $ spart flat-pre ####
@click.command("flat-pre")
@click.argument("q", callback=_partition_arg)
@click.option("--z", required=True, help="Flattening word, like wb.")
@click.option("--up", default=None, help="Source upper word, when z is its own conjugate.")
@click.option("--low", default=None, help="Source lower word.")
@json_option
@art_option
def flat_pre(q, z, up, low, as_json, art):
    """The partition that flattens to q."""
    p = flat_preimage(_signature(q.m, z, False), q, up, low)
    if p is None:
        raise PartitionError(f"the colors of q do not factor over '{z}'")
    echo_partition(p, as_json, art)


#### $ spart closure ####
@click.command("closure")
@click.argument("generators", nargs=-1)
@click.option("--file", type=click.Path(exists=True), help="Generators file.")
@click.option("--preset", help="A generator row such as On or Hn+.")
@click.option("--m", "levels", type=int, default=None, help="Number of levels.")
@click.option("--bound", type=int, default=None, help="Largest column count kept.")
@click.option("--threads", type=int, default=None)
@click.option("--max-rounds", type=int, default=None)
@click.option("--output", type=click.Path(), help="Write the category to this file.")
@click.option("--strict", is_flag=True, help="Fail when the closure is truncated.")
@click.option("--no-cache", is_flag=True)
@json_option
def closure_(
    generators,
    file,
    preset,
    levels,
    bound,
    threads,
    max_rounds,
    output,
    strict,
    no_cache,
    as_json,
):
    """Close generators under the category operations."""
    parts = _collect(generators, file, preset)
    if not parts:
        raise click.UsageError("give generators, --file or --preset")
    m = levels or parts[0].m
    bound = config.get_default("bound", bound)
    threads = config.get_default("threads", threads)
    cat = _cached_closure(parts, m, bound, threads, not no_cache, strict, max_rounds)
    if output:
        save_category(cat, output)
    if as_json:
        click.echo(json.dumps(category_to_json(cat)))
        return
    status = "closed" if cat.closed else "truncated"
    click.echo(f"{len(cat)} partitions within {cat.bound} columns ({status})")
    for p in cat:
        click.echo(format_partition(p))


#### $ spart merge ####
@click.command("merge")
@click.argument("categories", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("--output", type=click.Path(), help="Write the merged category to this file.")
@click.option("--close", "reclose", is_flag=True, help="Close the joint generators again.")
@click.option("--strict", is_flag=True)
@click.option("--no-cache", is_flag=True)
@json_option
def merge(categories, output, reclose, strict, no_cache, as_json):
    """Join saved categories into one store."""
    cats = [load_category(path) for path in categories]
    _progress(f"merging {len(cats)} categories")
    cat = reduce(merge_categories, cats)
    if reclose:
        threads = config.get_default("threads")
        cat = _cached_closure(cat.generators, cat.m, cat.bound, threads, not no_cache, strict)
    if output:
        save_category(cat, output)
    if as_json:
        click.echo(json.dumps(category_to_json(cat)))
        return
    status = "closed" if cat.closed else "truncated"
    click.echo(f"{len(cat)} partitions within {cat.bound} columns ({status})")
    for p in cat:
        click.echo(format_partition(p))


#### $ spart contains ####
@click.command("contains")
@click.argument("p", callback=_partition_arg)
@click.option("--category", "category_file", type=click.Path(exists=True), help="A saved category.")
@click.option("--file", type=click.Path(exists=True), help="Generators file.")
@click.option("--preset", help="A generator row such as On or Hn+.")
@click.option("--bound", type=int, default=None)
@click.option("--strict", is_flag=True)
@click.option("--no-cache", is_flag=True)
def contains_(p, category_file, file, preset, bound, strict, no_cache):
    """Decide membership: yes, no-within-bound or unknown."""
    if category_file:
        cat = load_category(category_file)
    else:
        parts = _collect((), file, preset)
        if not parts:
            raise click.UsageError("give --category, --file or --preset")
        bound = config.get_default("bound", bound)
        threads = config.get_default("threads")
        cat = _cached_closure(parts, p.m, bound, threads, not no_cache, strict)
    click.echo(contains(cat, p).value)


#### $ spart dual-pairs ####
@click.command("dual-pairs")
@click.option("--m", "levels", type=int, required=True, help="Number of levels.")
@json_option
def dual_pairs(levels, as_json):
    """List every solution of the conjugate equations."""
    pairs = duality_pairs_all(levels)
    if as_json:
        click.echo(
            json.dumps(
                [
                    {
                        "sigma": list(sigma_of(pr.r).images),
                        "r": partition_to_json(pr.r),
                        "s": partition_to_json(pr.s),
                    }
                    for pr in pairs
                ]
            )
        )
        return
    click.echo(f"{len(pairs)} duality pairs")
    for pr in pairs:
        click.echo(f"sigma = {sigma_of(pr.r).cycle_notation()}")
        click.echo(f"  r = {format_partition(pr.r)}")
        click.echo(f"  s = {format_partition(pr.s)}")


#### $ spart gram-rank ####
@click.command("gram-rank")
@click.argument("partitions", nargs=-1)
@click.option("--file", type=click.Path(exists=True))
@click.option("--n", "grading", required=True, help="Grading like 2 or 2,3.")
@click.option("--csv", "as_csv", is_flag=True, help="Print the Gram matrix as CSV.")
@click.option("--cross-check", is_flag=True, help="Recompute entries from tensors.")
@json_option
def gram_rank(partitions, file, grading, as_csv, cross_check, as_json):
    """Exact rank of the Gram matrix of the realized partitions."""
    parts = _collect(partitions, file)
    if not parts:
        raise click.UsageError("give partitions or --file")
    n = Grading.parse(grading)
    if n.m == 1 and parts[0].m > 1:
        n = Grading.uniform(n.dims[0], parts[0].m)
    _progress(f"gram matrix of {len(parts)} partitions")
    gram, rank = gram_rank_of(parts, n, cross_check)
    if as_json:
        click.echo(json.dumps({"matrix": [list(row) for row in gram.entries], "rank": rank}))
        return
    if as_csv:
        click.echo(gram.to_csv(), nl=False)
    click.echo(f"rank {rank}")


#### $ spart verify-laws ####
@click.command("verify-laws")
@click.argument("p", callback=_partition_arg)
@click.argument("q", callback=_partition_arg)
@click.option("--n", "grading", required=True, callback=_grading_arg)
@json_option
def verify_laws(p, q, grading, as_json):
    """Check the tensor, involution and composition laws of the realization."""
    report = verify_ops_laws(p, q, grading)
    if as_json:
        click.echo(json.dumps(report._asdict()))
    else:
        for name, value in report._asdict().items():
            shown = "n/a" if value is None else value
            click.echo(f"{name}: {shown}")
    if not report.ok:
        raise PartitionError("a realization law failed")


#### $ spart emit-relations ####
@click.command("emit-relations")
@click.argument("generators", nargs=-1)
@click.option("--file", type=click.Path(exists=True))
@click.option("--preset", help="A generator row such as On or Hn+.")
@click.option(
    "--n", "grading", required=True, help="Grading like 3 or 2,2; one dimension with --projective."
)
@click.option("--projective", is_flag=True, help="Emit the projective version of a preset.")
@click.option("--bound", type=int, default=4, show_default=True)
@json_option
def emit_relations(generators, file, preset, grading, projective, bound, as_json):
    """Print the defining relations of the quantum group of the generators."""
    verbose = click.get_current_context().find_root().obj.get("verbose")
    if projective:
        if not preset:
            raise click.UsageError("--projective needs --preset")
        n = Grading.parse(grading)
        if n.m != 1:
            raise PartitionError(
                f"--projective takes one dimension, used on both levels; got ({n})"
            )
        presentation = projective_presentation(
            load_preset(preset).generators, n.dims[0], verbose=verbose
        )
    else:
        parts = _collect(generators, file, preset)
        if not parts:
            raise click.UsageError("give generators, --file or --preset")
        m = parts[0].m
        n = Grading.parse(grading)
        if n.m == 1 and m > 1:
            n = Grading.uniform(n.dims[0], m)
        presentation = emit_presentation(parts, m, n, bound, verbose=verbose)
    if as_json:
        click.echo(json.dumps(presentation.to_json()))
    else:
        click.echo(presentation.render())


#### $ spart proj-gens ####
@click.command("proj-gens")
@click.argument("generators", nargs=-1)
@click.option("--file", type=click.Path(exists=True))
@click.option("--preset", help="A generator row such as On or Hn+.")
@click.option("--side", type=click.Choice(ROTATIONS), default="upper-right", show_default=True)
@json_option
@art_option
def proj_gens(generators, file, preset, side, as_json, art):
    """Generators of the projective version on two levels."""
    parts = _collect(generators, file)
    if preset:
        parts += load_preset(preset).generators
    if not parts:
        raise click.UsageError("give generators, --file or --preset")
    d0 = projective_generators(parts, side)
    if as_json:
        click.echo(json.dumps([partition_to_json(p) for p in d0]))
        return
    for p in d0:
        click.echo(render_ascii(p, art=True) if art else format_partition(p))


#### $ spart presets ####
@click.command("presets")
def list_presets():
    """List the shipped generator rows."""
    for alias, preset in all_presets().items():
        click.echo(f"* {alias}: {preset.description} ({len(preset.generators)} generators)")


# Wire up the interface
spart.add_command(version)
spart.add_command(config_)
spart.add_command(canon)
spart.add_command(compose)
spart.add_command(tensor)
spart.add_command(involute)
spart.add_command(rotate)
spart.add_command(perm)
spart.add_command(flat)
spart.add_command(flat_pre)
spart.add_command(closure_)
spart.add_command(contains_)
spart.add_command(merge)
spart.add_command(dual_pairs)
spart.add_command(gram_rank)
spart.add_command(verify_laws)
spart.add_command(emit_relations)
spart.add_command(proj_gens)
spart.add_command(list_presets)

config_.add_command(set_default)
config_.add_command(get_default)

if __name__ == "__main__":
    spart()
