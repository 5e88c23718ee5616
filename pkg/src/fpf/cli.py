"""Command-line interface.

Exit codes: 0 success, 1 a campaign found violations, 2 usage or input error.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from fpf import kernel
from fpf.core import PointSet, interpolate
from fpf.directions import direction_set, graph_presentation, missing_directions
from fpf.errors import FPFError
from fpf.fourier import fourier_coefficient, hyperplane_profile, zero_set
from fpf.setfile import format_set, parse_pair, parse_set, read_pair, read_set
from fpf.spectra import clique_bound, find_spectrum, is_spectral_pair, spectral_pair
from fpf.tiling import divisibility_obstruction, find_tiling_complement, is_tiling_pair, tileshot_classify
from fpf.verifier import CampaignConfig, check_pair, search_z35, verify_fuglede

FORMAT = click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text", show_default=True)


def _emit(fmt: str, data: dict, text: str) -> None:
    if fmt == "json":
        click.echo(json.dumps(data, sort_keys=True, indent=2))
    else:
        click.echo(text, nl=False)


def _load_set(path: str) -> PointSet:
    try:
        return read_set(path)
    except (OSError, FPFError) as exc:
        raise click.UsageError(f"{path}: {exc}") from None


def _pt(coords) -> str:
    return "(" + ",".join(map(str, coords)) + ")"


def _coords(E: PointSet) -> list[list[int]]:
    return [list(v.coords) for v in E]


@click.group()
def main() -> None:
    """Spectral sets and translational tiles in Z_p^d."""


@main.command()
@click.option("--set", "set_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--m", "freq", default=None, help='frequency as "c1,...,cd"')
@FORMAT
def fourier(set_path: str, freq: str | None, fmt: str) -> None:
    """Hyperplane profile and exact Fourier coefficient of a set."""
    E = _load_set(set_path)
    ambient = E.ambient
    if freq is not None:
        try:
            m = ambient.vector(int(c) % ambient.p for c in freq.split(","))
        except (ValueError, FPFError) as exc:
            raise click.BadParameter(str(exc), param_hint="--m") from None
        value = fourier_coefficient(E, m)
        profile = None if m.is_zero() else hyperplane_profile(E, m).counts
        data = {
            "m": list(m.coords),
            "profile": list(profile) if profile is not None else None,
            "cyclotomic": list(value.coeffs),
            "zero": value.is_zero(),
        }
        text = (
            f"m = {m}\n"
            + (f"profile n(t) = {list(profile)}\n" if profile is not None else "")
            + f"coefficient (xi-coordinates) = {list(value.coeffs)}\n"
            + f"verdict: {'ZERO' if value.is_zero() else 'NONZERO'}\n"
        )
        _emit(fmt, data, text)
        return
    Z = zero_set(E)
    groups = []
    for rep in Z.directions():
        members = sorted((rep.scale(r) for r in range(1, ambient.p)), key=lambda v: v.index)
        groups.append({"direction": list(rep.coords), "members": [list(v.coords) for v in members]})
    data = {"size": E.size, "zero_set_size": len(Z), "directions": groups}
    lines = [f"|E| = {E.size}, zero set has {len(Z)} frequencies in {len(groups)} direction classes"]
    for g in groups:
        lines.append(f"  {_pt(g['direction'])}: " + " ".join(map(_pt, g["members"])))
    _emit(fmt, data, "\n".join(lines) + "\n")


@main.command()
@click.option("--set", "set_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--spectrum", "spectrum_path", default=None, type=click.Path(exists=True, dir_okay=False))
@FORMAT
def spectral(set_path: str, spectrum_path: str | None, fmt: str) -> None:
    """Verify a spectral pair, or search for a spectrum."""
    E = _load_set(set_path)
    if not E.cells:
        raise click.UsageError("the empty set is excluded from spectral decisions")
    if spectrum_path is not None:
        A = _load_set(spectrum_path)
        if A.ambient != E.ambient:
            raise click.UsageError("set and spectrum live in different ambients")
        ok = bool(A.cells) and is_spectral_pair(E, A)
        data = {"spectral_pair": ok, "E": _coords(E), "A": _coords(A)}
        if ok:
            data["witness"] = [list(v.coords) for v in spectral_pair(E, A).witness]
        _emit(fmt, data, f"spectral pair: {ok}\n")
        return
    A = find_spectrum(E)
    if A is None:
        bound = clique_bound(E)
        data = {"spectral": False, "clique_bound": bound, "size": E.size}
        text = f"NOT SPECTRAL\nzero-set clique bound {bound} < |E| = {E.size}\n" if bound < E.size else \
            f"NOT SPECTRAL\nexhaustive clique search found no {E.size}-clique (colour bound {bound})\n"
        _emit(fmt, data, text)
        return
    data = {"spectral": True, "spectrum": _coords(A)}
    _emit(fmt, data, "SPECTRAL\nspectrum:\n" + format_set(A))


@main.command()
@click.option("--set", "set_path", required=True, type=click.Path(exists=True, dir_okay=False),
              help="set file, or a pair file whose second section is the complement")
@click.option("--complement", "complement_path", default=None, type=click.Path(exists=True, dir_okay=False))
@FORMAT
def tile(set_path: str, complement_path: str | None, fmt: str) -> None:
    """Verify a tiling pair, or search for a tiling complement."""
    text = Path(set_path).read_text(encoding="utf-8")
    try:
        if any(line.strip() == "---" for line in text.splitlines()):
            E, T = parse_pair(text)
        else:
            E, T = parse_set(text), None
        if complement_path is not None:
            T = read_set(complement_path)
    except FPFError as exc:
        raise click.UsageError(str(exc)) from None
    if not E.cells:
        raise click.UsageError("the empty set cannot tile")
    if T is not None:
        if T.ambient != E.ambient:
            raise click.UsageError("set and complement live in different ambients")
        ok = is_tiling_pair(E, T)
        _emit(fmt, {"tiling_pair": ok, "E": _coords(E), "T": _coords(T)}, f"tiling pair: {ok}\n")
        return
    obstruction = divisibility_obstruction(E)
    T = None if obstruction else find_tiling_complement(E)
    if T is None:
        reason = obstruction or "exact-cover search exhausted"
        _emit(fmt, {"tiles": False, "obstruction": reason}, f"NOT A TILE\n{reason}\n")
        return
    data = {"tiles": True, "complement": _coords(T)}
    out = "TILES\ncomplement:\n" + format_set(T)
    if E.ambient.d == 2:
        cls = tileshot_classify(E)
        data["class"] = cls.kind
        out += f"class: {cls.kind}\n"
    _emit(fmt, data, out)


@main.command()
@click.option("--set", "set_path", required=True, type=click.Path(exists=True, dir_okay=False))
@FORMAT
def directions(set_path: str, fmt: str) -> None:
    """Direction set, missing directions and graph presentation."""
    E = _load_set(set_path)
    if not E.cells:
        raise click.UsageError("direction set of the empty set")
    present = direction_set(E).representatives()
    missing = [c.representative.coords for c in missing_directions(E)]
    data: dict = {"directions": [list(c) for c in present], "missing": [list(c) for c in missing]}
    lines = [
        "directions: " + " ".join(map(_pt, present)),
        "missing: " + (" ".join(map(_pt, missing)) or "none"),
    ]
    if E.ambient.d == 2:
        G = graph_presentation(E)
        if G is None:
            data["graph"] = None
            lines.append("graph presentation: none (every direction is determined)")
        else:
            data["graph"] = {
                "kind": G.kind,
                "e1": list(G.e1.coords),
                "e2": list(G.e2.coords),
                "values": {str(x): fx for x, fx in G.values.items()},
            }
            lines.append(f"graph presentation ({G.kind}): e1 = {G.e1}, e2 = {G.e2}")
            lines.append("  f = " + ", ".join(f"{x}->{fx}" for x, fx in G.values.items()))
            if len(G.support) == E.ambient.p:
                data["graph"]["polynomial"] = list(interpolate(G.values, E.ambient.p))
                lines.append(f"  polynomial coefficients: {data['graph']['polynomial']}")
    _emit(fmt, data, "\n".join(lines) + "\n")


def _default_jobs() -> int:
    raw = os.environ.get("FPF_JOBS")
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise click.UsageError(f"FPF_JOBS must be an integer, got {raw!r}") from None


@main.command()
@click.option("--p", "p", required=True, type=int)
@click.option("--mode", default="exhaustive", show_default=True, help="exhaustive | size:<k> | sample:<n>")
@click.option("--seed", default=0, type=click.IntRange(0, 2**64 - 1), show_default=True)
@click.option("--jobs", default=None, type=click.IntRange(min=1), help="worker processes (default $FPF_JOBS or 1)")
@click.option("--audit", is_flag=True, help="disable size pruning and re-derive the size theorems")
@click.option("--out", "out_path", default=None, type=click.Path(dir_okay=False), help="write the JSON report here")
@click.option("--quiet", is_flag=True)
def verify(p: int, mode: str, seed: int, jobs: int | None, audit: bool, out_path: str | None, quiet: bool) -> None:
    """Run a Fuglede campaign in Z_p^2."""
    try:
        config = CampaignConfig.from_mode_string(p, mode, seed=seed, jobs=jobs or _default_jobs(), audit=audit)
    except (FPFError, ValueError) as exc:
        raise click.UsageError(str(exc)) from None

    def progress(done: int, total: int) -> None:
        if not quiet:
            click.echo(f"\r{done}/{total} blocks", nl=done == total, err=True)

    report = verify_fuglede(config, progress=progress)
    if out_path:
        Path(out_path).write_text(report.to_json(), encoding="utf-8")
    click.echo(report.summary(), nl=False)
    sys.exit(0 if report.ok else 1)


@main.command("check-pair")
@click.option("--file", "pair_path", required=True, type=click.Path(exists=True, dir_okay=False))
@FORMAT
def check_pair_cmd(pair_path: str, fmt: str) -> None:
    """Certify a pair file both as a spectral pair and as a tiling pair."""
    try:
        E, other = read_pair(pair_path)
    except FPFError as exc:
        raise click.UsageError(f"{pair_path}: {exc}") from None
    cert = check_pair(E, other)
    if fmt == "json":
        click.echo(cert.to_json(), nl=False)
    else:
        click.echo(cert.summary(), nl=False)


@main.command("search-z35")
@click.option("--budget-secs", default=600.0, type=float, show_default=True)
@click.option("--seed", default=0, type=click.IntRange(0, 2**64 - 1), show_default=True)
@click.option("--out", "out_path", default=None, type=click.Path(dir_okay=False), help="write the certificate JSON here")
def search_z35_cmd(budget_secs: float, seed: int, out_path: str | None) -> None:
    """Search for a 6-point spectral set in Z_3^5 (which cannot tile)."""
    cert = search_z35(budget_secs, seed)
    if cert is None:
        click.echo("no pair found within budget")
        return
    if out_path:
        Path(out_path).write_text(cert.to_json(), encoding="utf-8")
    click.echo(cert.summary(), nl=False)
    click.echo("E:\n" + format_set(cert.E) + "spectrum:\n" + format_set(cert.other), nl=False)


@main.command(hidden=True)
def backend() -> None:
    click.echo(kernel.BACKEND)


if __name__ == "__main__":
    main()
