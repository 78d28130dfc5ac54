"""Command-line surface: build and analyze quotients, covers, balls, spectra,
the example gallery, Schreier line graphs, decompositions, and the
acceptance suite.  Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import acceptance
from .complexes import (
    MComplex,
    from_json,
    is_link_connected,
    is_lower_path_connected,
    to_json,
    to_json_dict,
    validate_structure,
)
from .gallery import coxeter_complex, flag_complex, m_subgroup_rep
from .graphs import decompose_regular, format_multigraph, parse_multigraph, to_dot
from .lcc import link_connected_cover
from .permrep import (
    format_rep,
    intersect_reps,
    parse_permutation,
    parse_rep,
    random_rep_retry,
)
from .quotient import (
    build_quotient,
    complex_has_complete_skeleton,
    complex_is_simplicial,
    complex_is_upper_regular,
    complex_line_graph,
)
from .spectral import SpectralGapUndefined, coboundary_rank, spectral_gap, spectrum
from .universal import Ball, ball_from_cosets, build_ball
from .words import Params, Word, format_word, parse_word


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    return int(os.environ.get("FORGE_SEED", "0"))


def _fmt(x: float, raw: bool) -> str:
    return repr(x) if raw else f"{x:.6g}"


def _analyze_report(x: MComplex) -> str:
    lines = []
    lines.append(f"d: {x.params.d}")
    lines.append(f"k: {x.params.k}")
    lines.append(f"vertices: {x.n_vertices}")
    per_color = [sum(1 for c in x.vertex_colors if c == i) for i in range(x.d + 1)]
    lines.append("vertices-per-color: " + " ".join(str(c) for c in per_color))
    by_dim: dict[int, int] = {}
    for colors, lst in x.cells.items():
        by_dim[len(colors) - 1] = by_dim.get(len(colors) - 1, 0) + len(lst)
    for dim in sorted(by_dim):
        lines.append(f"multicells[{dim}]: {by_dim[dim]}")
    base_by_dim: dict[int, int] = {}
    for colors, lst in x.cells.items():
        base_by_dim.setdefault(len(colors) - 1, 0)
        base_by_dim[len(colors) - 1] += len({cell.vertices for cell in lst})
    for dim in sorted(base_by_dim):
        lines.append(f"cells[{dim}]: {base_by_dim[dim]}")
    lines.append(f"structure-valid: {str(validate_structure(x).ok).lower()}")
    lines.append(f"simplicial: {str(complex_is_simplicial(x)).lower()}")
    lines.append(f"upper-regular: {str(complex_is_upper_regular(x)).lower()}")
    lines.append(f"link-connected: {str(is_link_connected(x)).lower()}")
    lines.append(
        f"lower-path-connected: {str(is_lower_path_connected(x, x.d)).lower()}"
    )
    lines.append(f"skeleton-complete: {str(complex_has_complete_skeleton(x)).lower()}")
    hist: dict[int, int] = {}
    for cell in x.multicells(x.d - 1):
        deg = x.degree(cell.mid)
        hist[deg] = hist.get(deg, 0) + 1
    lines.append(
        f"degree-histogram[{x.d - 1}]: "
        + " ".join(f"{deg}:{hist[deg]}" for deg in sorted(hist))
    )
    return "\n".join(lines) + "\n"


def _ball_json(ball: Ball) -> str:
    doc = to_json_dict(ball.complex)
    doc["radius"] = ball.radius
    doc["cell_words"] = [
        {"cell": [list(mid[0]), mid[1]], "word": format_word(w)}
        for mid, w in sorted(ball.cell_words.items())
    ]
    return json.dumps(doc, indent=1) + "\n"


def cmd_build(args) -> int:
    rep = parse_rep(_read(args.rep))
    q = build_quotient(rep)
    _write(args.out, to_json(q.complex))
    return 0


def cmd_analyze(args) -> int:
    x = from_json(_read(args.complex))
    _write(args.out, _analyze_report(x))
    return 0


def cmd_lcc(args) -> int:
    x = from_json(_read(args.complex))
    cover, proj = link_connected_cover(x)
    _write(args.out, to_json(cover))
    if args.map:
        entries = [
            {"from": [list(src[0]), src[1]], "to": [list(dst[0]), dst[1]]}
            for src, dst in sorted(proj.items())
        ]
        _write(args.map, json.dumps(entries, indent=1) + "\n")
    return 0


def cmd_spectra(args) -> int:
    x = from_json(_read(args.complex))
    lines = []
    lines.append(f"forms: {sum(1 for _ in x.multicells(x.d - 1))}")
    lines.append(f"coboundary-rank: {coboundary_rank(x, tol=args.tol)}")
    try:
        lam = spectral_gap(x, tol=args.tol)
        lines.append(f"lambda: {_fmt(lam, args.raw)}")
    except SpectralGapUndefined as exc:
        lines.append(f"lambda: undefined ({exc})")
    if args.full:
        eigs = spectrum(x)
        clusters: list[tuple[float, int]] = []
        for e in eigs:
            e = 0.0 if abs(e) < 5e-4 else float(e)
            if clusters and abs(clusters[-1][0] - e) < 5e-4:
                clusters[-1] = (clusters[-1][0], clusters[-1][1] + 1)
            else:
                clusters.append((e, 1))
        lines.append(
            "spectrum: " + " ".join(f"{val:.3f}x{mult}" for val, mult in clusters)
        )
    _write(args.out, "\n".join(lines) + "\n")
    return 0


def cmd_ball(args) -> int:
    p = Params(args.d, args.k)
    ball = ball_from_cosets(p, args.radius) if args.via_cosets else build_ball(p, args.radius)
    _write(args.out, _ball_json(ball))
    return 0


def cmd_random(args) -> int:
    p = Params(args.d, args.k)
    rep, tries = random_rep_retry(p, args.n, seed=_seed(args))
    if tries > 1:
        print(f"note: {tries - 1} intransitive draws rejected", file=sys.stderr)
    _write(args.out, format_rep(rep))
    return 0


def cmd_common_cover(args) -> int:
    r1 = parse_rep(_read(args.rep1))
    r2 = parse_rep(_read(args.rep2))
    rep, _ = intersect_reps(r1, r2)
    _write(args.out, format_rep(rep))
    return 0


def cmd_line_graph(args) -> int:
    rep = parse_rep(_read(args.rep))
    g = complex_line_graph(build_quotient(rep).complex)
    _write(args.out, to_dot(g) if args.dot else format_multigraph(g))
    return 0


def cmd_decompose(args) -> int:
    g = parse_multigraph(_read(args.graph))
    result = decompose_regular(g, args.k)
    if result is None:
        print(f"no decomposition with m + 2f = {args.k} exists", file=sys.stderr)
        return 1
    lines = [f"k: {args.k}", f"factors: {len(result)}"]
    for t, (kind, chosen) in enumerate(result, start=1):
        edges = " ".join(
            f"{g.edges[e][0] + 1}-{g.edges[e][1] + 1}" for e in sorted(chosen)
        )
        lines.append(f"factor {t}: {kind}: {edges}")
    _write(args.out, "\n".join(lines) + "\n")
    return 0


def cmd_gallery(args) -> int:
    if args.family == "m":
        rep = m_subgroup_rep(Params(args.d, args.k))
        _write(args.out, format_rep(rep))
        return 0
    if args.family == "coxeter":
        lines = [
            ln
            for ln in _read(args.gens).splitlines()
            if ln.strip() and not ln.lstrip().startswith("#")
        ]
        degree = int(lines[0])
        gens = [parse_permutation(ln, degree) for ln in lines[1:]]
        x, rep = coxeter_complex(gens)
        if args.out_rep:
            _write(args.out_rep, format_rep(rep))
        _write(args.out, to_json(x))
        return 0
    if args.family == "flag":
        x = flag_complex(args.dim, args.q, ordered=args.ordered)
        _write(args.out, to_json(x))
        return 0
    raise ValueError(f"unknown gallery family {args.family}")


def cmd_verify_all(args) -> int:
    if args.suite != "desk":
        raise ValueError(f"unknown suite {args.suite!r}; only 'desk' is available")
    failures = acceptance.run_all(verbose=True)
    return 1 if failures else 0


def cmd_reduce(args) -> int:
    p = Params(args.d, args.k)
    from .words import reduce_word

    w = parse_word(args.word)
    _write(args.out, format_word(reduce_word(w, p)) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="multiforge",
        description="regular multicomplexes from permutation actions",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def add_out(p):
        p.add_argument("--out", default=None, help="output file (default stdout)")

    p = sub.add_parser("build", help="quotient complex from a rep file")
    p.add_argument("--rep", required=True, help="rep file ('-' for stdin)")
    add_out(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("analyze", help="structural report for a complex")
    p.add_argument("complex", help="complex JSON ('-' for stdin)")
    add_out(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("lcc", help="link-connected cover")
    p.add_argument("complex")
    p.add_argument("--map", default=None, help="write the projection map JSON here")
    add_out(p)
    p.set_defaults(func=cmd_lcc)

    p = sub.add_parser("spectra", help="upper-Laplacian spectral gap")
    p.add_argument("complex")
    p.add_argument("--full", action="store_true", help="print the full spectrum")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--raw", action="store_true", help="full float precision")
    add_out(p)
    p.set_defaults(func=cmd_spectra)

    p = sub.add_parser("ball", help="radius-n ball of the universal complex")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--via-cosets", action="store_true", help="use the coset construction")
    add_out(p)
    p.set_defaults(func=cmd_ball)

    p = sub.add_parser("random", help="random transitive rep (order-dividing-k generators)")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=None, help="defaults to $FORGE_SEED or 0")
    add_out(p)
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("common-cover", help="intersection rep covering both inputs")
    p.add_argument("rep1")
    p.add_argument("rep2")
    add_out(p)
    p.set_defaults(func=cmd_common_cover)

    p = sub.add_parser("line-graph", help="Schreier line graph of a rep's quotient")
    p.add_argument("--rep", required=True)
    p.add_argument("--dot", action="store_true", help="emit DOT with color classes")
    add_out(p)
    p.set_defaults(func=cmd_line_graph)

    p = sub.add_parser("decompose", help="matching/2-factor decomposition of a multigraph")
    p.add_argument("graph", help="multigraph text file")
    p.add_argument("--k", type=int, required=True)
    add_out(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("gallery", help="example families")
    gal = p.add_subparsers(dest="family", required=True)
    g = gal.add_parser("m", help="exponent-sum kernel rep")
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    add_out(g)
    g.set_defaults(func=cmd_gallery, family="m")
    g = gal.add_parser("coxeter", help="chamber complex from involution generators")
    g.add_argument("--gens", required=True, help="file: degree line, then permutations")
    g.add_argument("--out-rep", default=None, help="also write the kernel rep here")
    add_out(g)
    g.set_defaults(func=cmd_gallery, family="coxeter")
    g = gal.add_parser("flag", help="flag complex of F_q^dim")
    g.add_argument("--dim", type=int, required=True)
    g.add_argument("--q", type=int, required=True)
    g.add_argument("--ordered", action="store_true", help="attach an arbitrary ordering")
    add_out(g)
    g.set_defaults(func=cmd_gallery, family="flag")

    p = sub.add_parser("reduce", help="reduce a word to normal form")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("word", help="e.g. 'a0^2 a1^-1' (rightmost letter applies first)")
    add_out(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify-all", help="run the acceptance suite")
    p.add_argument("--suite", default="desk")
    p.set_defaults(func=cmd_verify_all)

    return top


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
