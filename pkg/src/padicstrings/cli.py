"""Command-line front end.

Usage:
    padicstrings info --family cantor-p --p 3
    padicstrings dims --family rational --p 3 --m 2 --k 1 --tmin 0 --tmax 3
    padicstrings tube --family cantor-p --p 3 --grid log:1e-4:1:100
    padicstrings content --spec cs5.json
    padicstrings adelic --family l-half --s 1 --pmax 50
    padicstrings euler --s 2 --pmax 3 --j 2
    padicstrings artin --x -6/5

Exit codes: 0 success, 2 argument/domain error, 3 resource limit.
Rationals print as ``num/den``; floats in CSV/text use 17 significant digits.
"""

from __future__ import annotations

import csv
import io
import json
import sys
import warnings
from fractions import Fraction
from pathlib import Path
from typing import Optional

import click

from . import exactnum, strings, tube, zeta
from .errors import ArgumentError, PadicStringsError, ResourceLimitError, UnsupportedFamilyError
from .exactnum import format_rational

FORMATS = ("text", "json", "csv")


def fmt_float(x: float) -> str:
    return f"{x:.17g}"


def fmt_value(x) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, complex):
        return fmt_float(x.real) if x.imag == 0 else f"{fmt_float(x.real)}{x.imag:+.17g}j"
    return fmt_float(x)


def _jsonable(x):
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def to_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else v if isinstance(v, str) else fmt_value(v) for v in row])
    return buf.getvalue()


def emit(text: str, out: Optional[str]) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


def render(fmt: str, record: dict, text: str) -> str:
    """Render a flat record: ``text`` as given, JSON sorted, CSV as key/value rows."""
    if fmt == "json":
        return json.dumps(_jsonable(record), sort_keys=True, indent=2)
    if fmt == "csv":
        return to_csv(["key", "value"], [[k, json.dumps(_jsonable(v)) if isinstance(v, (dict, list)) else v] for k, v in record.items()])
    return text


def parse_s(text: str):
    """Integer if possible (exact path), else real, else complex."""
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise ArgumentError(f"cannot parse s={text!r}") from None


def parse_scale(text: str) -> float:
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise ArgumentError(f"not a number: {text!r}") from None


# -- shared options ---------------------------------------------------------


def output_options(default: str):
    def wrap(f):
        f = click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write to FILE instead of stdout.")(f)
        f = click.option("--format", "fmt", type=click.Choice(FORMATS), default=default, show_default=True)(f)
        return f

    return wrap


def descriptor_options(f):
    f = click.option("--diagonal", is_flag=True, help="Diagonal kept set (rational strings, m=2, k=1).")(f)
    f = click.option("--S", "kept", default=None, help="Comma-separated kept blocks for rational strings.")(f)
    f = click.option("--k", type=int, default=None)(f)
    f = click.option("--m", type=int, default=None, help="Block size, or base of a Smith string.")(f)
    f = click.option("--p", type=int, default=None, help="Prime.")(f)
    f = click.option("--family", default=None, help="rational | cantor-p | cantor-2 | smith | base-p-real | euler | harmonic")(f)
    f = click.option("--spec", "spec_file", type=click.Path(exists=True, dir_okay=False), default=None, help="JSON descriptor file.")(f)
    return f


def _echo_warnings(fn, *args):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        result = fn(*args)
    for w in caught:
        click.echo(f"warning: {w.message}", err=True)
    return result


def build_descriptor(spec_file, family, p, m, k, kept, diagonal) -> strings.FractalStringDesc:
    if spec_file:
        if family is not None:
            raise ArgumentError("give either --spec or --family, not both")
        return _echo_warnings(strings.from_json, Path(spec_file).read_text(encoding="utf-8"))
    if family is None:
        raise ArgumentError("need --spec FILE or --family")
    data = {"family": family, "p": p, "m": m, "k": k, "diagonal": diagonal}
    if kept is not None:
        try:
            data["S"] = [int(a) for a in kept.split(",") if a.strip()]
        except ValueError:
            raise ArgumentError(f"bad kept set {kept!r}") from None
    if strings.parse_family(family) is strings.Family.SMITH and m is None:
        data["m"] = p
    return _echo_warnings(strings.from_dict, data)


# -- commands ---------------------------------------------------------------


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def cli():
    """Exact p-adic, real and adelic fractal strings."""


def info_record(desc: strings.FractalStringDesc) -> tuple[dict, list[str]]:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        z = zeta.zeta_of(desc)
    notes = [str(w.message) for w in caught] + list(desc.flags)
    record = {"family": desc.family.value, "label": desc.label, "descriptor": desc.to_dict()}
    if isinstance(z, zeta.ZetaClosedForm):
        dim = zeta.dimension(z)
        res = zeta.residue_at(z)
        record.update(
            zeta={"C": z.C, "q": z.q, "r": z.r, "const": z.const, "formula": z.formula()},
            D={"exact": dim.exact, "log_r": dim.r, "log_q": dim.q, "value": dim.value},
            period=zeta.period(z),
            residue={"coefficient": res.coefficient, "log_of": res.log_base, "value": res.value},
        )
    else:
        record.update(zeta=None, D=None, period=None, residue=None)
    record["total_length"] = desc.total_length
    try:
        record["m_av"] = tube.average_content_closed(desc).value
    except UnsupportedFamilyError:
        record["m_av"] = None
    record["warnings"] = notes
    return record, notes


@cli.command()
@descriptor_options
@output_options("json")
def info(spec_file, family, p, m, k, kept, diagonal, fmt, out):
    """Dimension, period, residue, total length and average content."""
    desc = build_descriptor(spec_file, family, p, m, k, kept, diagonal)
    record, notes = info_record(desc)
    for note in notes:
        click.echo(f"warning: {note}", err=True)
    lines = [f"{key}: {json.dumps(_jsonable(val), sort_keys=True)}" for key, val in record.items()]
    emit(render(fmt, record, "\n".join(lines)), out)


@cli.command()
@descriptor_options
@click.option("--tmin", type=float, required=True)
@click.option("--tmax", type=float, required=True)
@output_options("csv")
def dims(spec_file, family, p, m, k, kept, diagonal, tmin, tmax, fmt, out):
    """Complex dimensions with imaginary part in [tmin, tmax]."""
    desc = build_descriptor(spec_file, family, p, m, k, kept, diagonal)
    z = zeta.zeta_of(desc)
    if isinstance(z, zeta.HarmonicZeta):
        raise UnsupportedFamilyError("no pole lattice for the harmonic string")
    points = zeta.complex_dimensions(z, tmin, tmax)
    rows = [[w.n, w.value.real, w.value.imag] for w in points]
    if fmt == "json":
        text = json.dumps([{"n": n, "re": re, "im": im} for n, re, im in rows], indent=2)
    elif fmt == "csv":
        text = to_csv(["n", "re", "im"], rows)
    else:
        text = "\n".join(f"{n} {fmt_float(re)} {fmt_float(im)}" for n, re, im in rows)
    emit(text, out)


def parse_grid(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 4 or parts[0] != "log":
        raise ArgumentError("grid must look like log:lo:hi:n")
    try:
        n = int(parts[3])
    except ValueError:
        raise ArgumentError(f"bad grid size {parts[3]!r}") from None
    return parse_scale(parts[1]), parse_scale(parts[2]), n


@cli.command("tube")
@descriptor_options
@click.option("--grid", default="log:1e-4:1:50", show_default=True, help="log:lo:hi:n scales.")
@click.option("--series-n", type=int, default=10_000, show_default=True)
@click.option("--smoothing", type=click.Choice(["cesaro", "none"]), default="cesaro", show_default=True)
@output_options("csv")
def tube_cmd(spec_file, family, p, m, k, kept, diagonal, grid, series_n, smoothing, fmt, out):
    """Tube volume table: direct sum, complex-dimension series, relative error."""
    desc = build_descriptor(spec_file, family, p, m, k, kept, diagonal)
    lo, hi, n = parse_grid(grid)
    header = ["ln_eps", "eps", "V", "ratio", "V_series", "rel_error", "flag"]
    rows = []
    for sample in tube.wave_table(desc, lo, hi, n):
        if sample.jump:
            series, err, flag = None, None, "jump"
        else:
            series = tube.volume_series(desc, sample.eps, series_n, smoothing)
            err, flag = tube.relative_error(series, sample.V), ""
        rows.append([sample.log_eps, sample.eps, float(sample.V), sample.g, series, err, flag])
    if fmt == "json":
        text = json.dumps([dict(zip(header, row)) for row in rows], indent=2)
    else:
        text = to_csv(header, rows)
    emit(text, out)


@cli.command()
@descriptor_options
@click.option("--m0", type=int, default=2, show_default=True, help="Start scale q**-m0.")
@click.option("--periods", type=int, default=5, show_default=True)
@output_options("json")
def content(spec_file, family, p, m, k, kept, diagonal, m0, periods, fmt, out):
    """Average Minkowski content (closed form vs Cesàro average) and measurability."""
    desc = build_descriptor(spec_file, family, p, m, k, kept, diagonal)
    report = tube.nonmeasurability_witness(desc, m0, periods)
    record = report.to_dict()
    text = f"m_av {fmt_float(report.m_av_closed)} numeric {fmt_float(report.m_av_numeric)} ratio {format_rational(report.ratio)} {report.verdict}"
    emit(render(fmt, record, text), out)


@cli.command()
@click.option("--family", type=click.Choice(zeta.ADELIC_FAMILIES), required=True)
@click.option("--s", "s_text", required=True)
@click.option("--pmax", type=int, default=100, show_default=True)
@click.option("--m", type=int, default=3, show_default=True, help="Smith base for cantor-smith.")
@output_options("text")
def adelic(family, s_text, pmax, m, fmt, out):
    """Partial adelic zeta product over p <= pmax with a divergence trend."""
    s = parse_s(s_text)
    if isinstance(s, complex):
        raise ArgumentError("adelic products take real s")
    res = zeta.adelic_partial_product(family, s, pmax, m)
    record = {"family": family, "s": s, "pmax": pmax, "value": res.value, "trend": res.trend, "tail_log": res.tail_log}
    emit(render(fmt, record, f"{fmt_value(res.value)} {res.trend}"), out)


@cli.command()
@click.option("--s", "s_text", required=True)
@click.option("--pmax", type=int, required=True)
@click.option("--j", "J", type=int, required=True, help="Highest prime power per factor.")
@click.option("--squared", is_flag=True, help="Euler-Riemann string: square of the product.")
@output_options("text")
def euler(s_text, pmax, J, squared, fmt, out):
    """Truncated Euler product prod_{p<=pmax} sum_{j<=J} p**(-js)."""
    s = parse_s(s_text)
    value = zeta.euler_riemann_partial(s, pmax, J) if squared else zeta.euler_partial_product(s, pmax, J)
    record = {"s": s, "pmax": pmax, "J": J, "squared": squared, "value": value}
    emit(render(fmt, record, fmt_value(value)), out)


@cli.command()
@click.option("--x", "x_text", required=True, help="Nonzero rational, e.g. -6/5.")
@output_options("text")
def artin(x_text, fmt, out):
    """Product of all normalized absolute values of x (always 1)."""
    x = exactnum.as_rational(x_text)
    value = exactnum.artin_whaples_product(x)
    factors = {str(p): exactnum.abs_v(x, p) for p in exactnum.support(x)}
    factors["inf"] = exactnum.abs_v(x, exactnum.INFINITY)
    record = {"x": x, "factors": factors, "product": value}
    emit(render(fmt, record, format_rational(value)), out)


@cli.command()
@click.option("--x", "x_text", required=True)
@click.option("--p", type=int, required=True)
@click.option("--n", "N", type=int, required=True, help="Number of digits.")
@output_options("text")
def digits(x_text, p, N, fmt, out):
    """p-adic digits a_0 .. a_{n-1} of a p-adic integer."""
    d = exactnum.digits_of(exactnum.as_rational(x_text), p, N)
    record = {"p": p, "start": d.start, "digits": list(d.digits)}
    emit(render(fmt, record, " ".join(map(str, d.digits))), out)


@cli.command(name="membership")
@click.option("--x", "x_text", required=True)
@click.option("--p", type=int, required=True)
@click.option("--n", "N", type=int, required=True, help="Digits to inspect.")
@output_options("text")
def membership(x_text, p, N, fmt, out):
    """Depth-n test for the p-adic Cantor set (all digits even)."""
    res = strings.cantor_set_membership(exactnum.as_rational(x_text), p, N)
    record = {"inside": res.inside, "first_odd_digit": res.first_odd_digit}
    emit(render(fmt, record, str(res)), out)


cli.add_command(membership, name="cantor-membership")


@cli.command()
@descriptor_options
@click.option("--generations", "G", type=int, required=True)
@output_options("csv")
def unfold(spec_file, family, p, m, k, kept, diagonal, G, fmt, out):
    """Balls of the first G generations (kept components and residual)."""
    desc = build_descriptor(spec_file, family, p, m, k, kept, diagonal)
    u = strings.unfold(desc, G)
    rows = [[g + 1, "kept", b.center, b.k, b.measure] for g, gen in enumerate(u.kept_by_generation) for b in gen]
    rows += [[G, "residual", b.center, b.k, b.measure] for b in u.residual]
    if fmt == "csv":
        text = to_csv(["generation", "role", "center", "scale", "measure"], rows)
    else:
        record = {
            "kept_counts": u.kept_counts,
            "kept_measure": u.kept_measure,
            "residual_count": len(u.residual),
            "residual_measure": u.residual_measure,
        }
        text = render(fmt, record, f"kept {u.kept_counts} residual {len(u.residual)} measure {format_rational(u.residual_measure)}")
    emit(text, out)


@cli.command()
@descriptor_options
@click.option("--primes", default=None, help="Comma-separated primes: check the adelic Cantor approximation instead.")
@click.option("--generations", "G", type=int, required=True)
@output_options("text")
def selfsim(spec_file, family, p, m, k, kept, diagonal, primes, G, fmt, out):
    """Self-similarity of the ball decomposition at depth G."""
    if primes:
        try:
            plist = [int(x) for x in primes.split(",")]
        except ValueError:
            raise ArgumentError(f"bad prime list {primes!r}") from None
        approx = strings.adelic_approx(plist, G)
        ok = all(approx.selfsimilar.values())
        record = {"primes": list(approx.primes), "selfsimilar": {str(q): v for q, v in approx.selfsimilar.items()},
                  "kept_counts": {str(q): c for q, c in approx.kept_counts.items()}, "residual_product": approx.residual_product}
        text = f"{str(ok).lower()} residual {format_rational(approx.residual_product)}"
    else:
        desc = build_descriptor(spec_file, family, p, m, k, kept, diagonal)
        ok = strings.selfsimilar_check(desc, G)
        record = {"label": desc.label, "generations": G, "selfsimilar": ok}
        text = str(ok).lower()
    emit(render(fmt, record, text), out)


@cli.command()
@click.option("--p", type=int, required=True)
@click.option("--a", type=float, required=True)
@click.option("--b", type=float, required=True)
@click.option("--oracle-depth", type=int, default=0, help="Also run the ball-partition oracle at this depth.")
@output_options("text")
def veneziano(p, a, b, oracle_depth, fmt, out):
    """Local p-adic Veneziano amplitude  int |x|^a |1-x|^b dx."""
    value = zeta.veneziano_amplitude(p, a, b)
    record = {"p": p, "a": a, "b": b, "value": value}
    text = fmt_float(value)
    if oracle_depth:
        oracle = zeta.veneziano_ball_sum(p, a, b, oracle_depth)
        record["oracle"] = oracle
        record["abs_diff"] = abs(oracle - value)
        text += f" oracle {fmt_float(oracle)}"
    emit(render(fmt, record, text), out)


def main(argv: Optional[list[str]] = None) -> int:
    try:
        cli.main(args=argv, prog_name="padicstrings", standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except ResourceLimitError as exc:
        click.echo(f"error: {exc}", err=True)
        return 3
    except (PadicStringsError, ZeroDivisionError, OverflowError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
