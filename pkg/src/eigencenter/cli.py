"""Command-line entry point.

Exit codes: 0 success, 1 a verification check failed (``verify``), 2 usage,
input or IO errors.
"""

from __future__ import annotations

import csv
import io
import json
import sys
import warnings
from pathlib import Path

import click
import numpy as np

from . import __version__
from .centering import (
    CenteringScheme,
    WeightVector,
    double_center,
    mean_norm_sq_from_gram,
)
from .core_linalg import sym_eigen
from .datasets import DataFileError, Dataset, banana, load_csv, load_dataset, write_csv
from .kernels import KernelSpec, gram_matrix, parse_kernel, sq_distances
from .methods import keca_decompose, kpca_fit, kpca_transform, mds_embed
from .spectral_analysis import (
    DEFAULT_TOLERANCES,
    eigen_pairs,
    full_report,
    schur_horn_dprime_gram,
)


class InputError(click.ClickException):
    exit_code = 2


KERNEL_HELP = ("kernel as name[:param[:param]]: linear, gaussian:SIGMA, poly:C:P, "
               "negative_half_sqdist")


def data_options(f):
    opts = [
        click.option("--dataset", type=click.Choice(["iris", "banana"]), default=None,
                     help="builtin dataset"),
        click.option("--input", "input_path", type=click.Path(path_type=Path), default=None,
                     help="CSV file, one sample per row"),
        click.option("--labels/--no-labels", default=False, help="last CSV column holds labels"),
        click.option("--delimiter", default=",", show_default=True),
        click.option("--n", "n_samples", type=int, default=200, show_default=True,
                     help="banana sample count"),
        click.option("--noise", type=float, default=0.2, show_default=True,
                     help="banana noise standard deviation"),
        click.option("--seed", type=int, default=0, show_default=True, help="banana seed"),
        click.option("--kernel", "kernel_text", default="linear", show_default=True,
                     help=KERNEL_HELP),
        click.option("--center", type=click.Choice(["mean", "none", "weighted"]),
                     default="mean", show_default=True),
        click.option("--weights", "weights_path", type=click.Path(path_type=Path), default=None,
                     help="weights file for --center weighted (must sum to 1)"),
        click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default=None,
                     help="output format (command default if omitted)"),
        click.option("-o", "--output", type=click.Path(path_type=Path), default=None,
                     help="output file (stdout if omitted)"),
    ]
    for opt in reversed(opts):
        f = opt(f)
    return f


def _load(dataset, input_path, labels, delimiter, n_samples, noise, seed) -> Dataset:
    if (dataset is None) == (input_path is None):
        raise click.UsageError("give exactly one of --dataset or --input")
    try:
        if dataset:
            return load_dataset(dataset, n_samples, noise, seed)
        return load_csv(input_path, has_labels=labels, delimiter=delimiter)
    except OSError as exc:
        raise InputError(f"cannot read {input_path}: {exc.strerror or exc}") from None
    except (DataFileError, ValueError) as exc:
        raise InputError(str(exc)) from None


def _kernel(text) -> KernelSpec:
    try:
        return parse_kernel(text)
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--kernel") from None


def _read_vector(path: Path) -> np.ndarray:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return np.array([float(t) for t in text.replace(",", " ").split()])
    except ValueError:
        raise InputError(f"{path}: weights must be numbers") from None


def _scheme(center, weights_path, n) -> CenteringScheme:
    if center != "weighted":
        if weights_path is not None:
            raise click.UsageError("--weights only applies to --center weighted")
        return CenteringScheme(center)
    if weights_path is None:
        raise click.UsageError("--center weighted needs --weights")
    w = _read_vector(weights_path)
    if w.size != n:
        raise click.UsageError(f"weights file has {w.size} values, data have {n} samples")
    try:
        return CenteringScheme.weighted(WeightVector(w))
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None


def _emit(text: str, output: Path | None):
    if output is None:
        click.echo(text, nl=False)
        return
    try:
        output.parent.mkdir(parents=True, exist_ok=True)
        output.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write {output}: {exc.strerror or exc}") from None


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in r])
    return buf.getvalue()


def _parse_tolerances(items) -> dict:
    out = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep or name not in DEFAULT_TOLERANCES:
            raise click.BadParameter(
                f"{item!r}; expected NAME=VALUE with NAME one of {', '.join(DEFAULT_TOLERANCES)}",
                param_hint="--tol")
        try:
            out[name] = float(value)
        except ValueError:
            raise click.BadParameter(f"{item!r}: value is not a number", param_hint="--tol") from None
    return out


@click.group()
@click.version_option(version=__version__)
def main():
    """Eigenanalysis of centered and non-centered Gram matrices."""


@main.command()
@data_options
@click.option("-m", "m", type=int, default=None, help="number of eigenvalues to list")
def eigen(dataset, input_path, labels, delimiter, n_samples, noise, seed, kernel_text, center,
          weights_path, fmt, output, m):
    """Eigenvalues of K and of its centered version, side by side."""
    ds = _load(dataset, input_path, labels, delimiter, n_samples, noise, seed)
    spec = _kernel(kernel_text)
    scheme = _scheme(center, weights_path, ds.n)
    k = gram_matrix(ds.x, spec)
    lam = sym_eigen(k.matrix).eigenvalues
    lamc = sym_eigen(double_center(k, scheme).matrix).eigenvalues
    m = ds.n if m is None else max(1, min(m, ds.n))
    if (fmt or "csv") == "csv":
        text = _csv(["index", "lambda", "lambda_c"],
                    [(i + 1, lam[i], lamc[i]) for i in range(m)])
    else:
        text = _json({"dataset": ds.name, "kernel": spec.to_dict(), "n": ds.n,
                      "centering": scheme.to_dict(),
                      "eigenvalues": {"raw": lam[:m].tolist(), "centered": lamc[:m].tolist()}})
    _emit(text, output)


@main.command()
@data_options
@click.option("--tol", "tol_items", multiple=True, metavar="NAME=VALUE",
              help="override a relative tolerance")
def verify(dataset, input_path, labels, delimiter, n_samples, noise, seed, kernel_text, center,
           weights_path, fmt, output, tol_items):
    """Run every applicable check; exit 1 if any fails."""
    ds = _load(dataset, input_path, labels, delimiter, n_samples, noise, seed)
    spec = _kernel(kernel_text)
    scheme = _scheme(center, weights_path, ds.n)
    tols = _parse_tolerances(tol_items)
    report = full_report(ds.x, spec, scheme, ds.name, tols)
    if (fmt or "json") == "json":
        text = _json(report.to_dict())
    else:
        text = _csv(["name", "margin", "tolerance", "passed", "status"],
                    [(c.name, c.margin, c.tolerance, c.passed, c.status) for c in report.checks])
    _emit(text, output)
    for c in report.checks:
        if not c.passed:
            click.echo(f"FAILED {c.name}: margin {c.margin:.3e}, tolerance {c.tolerance:.3e}", err=True)
    sys.exit(0 if report.passed else 1)


@main.command()
@data_options
def bounds(dataset, input_path, labels, delimiter, n_samples, noise, seed, kernel_text, center,
           weights_path, fmt, output):
    """Cumulative lower-bound terms against cumulative centered eigenvalues."""
    ds = _load(dataset, input_path, labels, delimiter, n_samples, noise, seed)
    spec = _kernel(kernel_text)
    if center != "mean":
        raise click.UsageError("bounds uses mean centering")
    k = gram_matrix(ds.x, spec)
    raw = eigen_pairs(k, "gram_raw")
    lamc = sym_eigen(double_center(k).matrix).eigenvalues
    entries = schur_horn_dprime_gram(raw, mean_norm_sq_from_gram(k), lamc)
    if (fmt or "csv") == "csv":
        text = _csv(["t", "cum_dprime", "cum_lambda_c"],
                    [(t + 1, e.cumulative_d, e.cumulative_lambda_c) for t, e in enumerate(entries)])
    else:
        text = _json({"dataset": ds.name, "kernel": spec.to_dict(), "rows": [
            {"t": t + 1, "index": e.index, "d_prime": e.d_prime, "lambda_c": e.lambda_c,
             "cum_dprime": e.cumulative_d, "cum_lambda_c": e.cumulative_lambda_c}
            for t, e in enumerate(entries)]})
    _emit(text, output)


def _grid(x: np.ndarray, size: int, margin: float = 0.1):
    lo, hi = x.min(axis=1), x.max(axis=1)
    pad = margin * np.where(hi > lo, hi - lo, 1.0)
    gx = np.linspace(lo[0] - pad[0], hi[0] + pad[0], size)
    gy = np.linspace(lo[1] - pad[1], hi[1] + pad[1], size)
    xx, yy = np.meshgrid(gx, gy)
    return np.vstack([xx.ravel(), yy.ravel()])


@main.command()
@data_options
@click.option("-m", "m", type=int, default=5, show_default=True)
@click.option("--normalization", type=click.Choice(["variance_preserving", "unit_variance"]),
              default="variance_preserving", show_default=True)
@click.option("--grid", "grid_size", type=int, default=None,
              help="emit projections on a GRID×GRID lattice over the data (2-D data only)")
def kpca(dataset, input_path, labels, delimiter, n_samples, noise, seed, kernel_text, center,
         weights_path, fmt, output, m, normalization, grid_size):
    """Kernel PCA: model JSON, training scores CSV, or contour grid data.

    With --grid, both the centered and the non-centered model are projected
    on the grid (10% margin around the bounding box); CSV columns are
    variant, component, x, y, value.
    """
    ds = _load(dataset, input_path, labels, delimiter, n_samples, noise, seed)
    spec = _kernel(kernel_text)
    scheme = _scheme(center, weights_path, ds.n)
    k = gram_matrix(ds.x, spec)
    try:
        if grid_size is not None:
            if ds.d != 2:
                raise click.UsageError("--grid needs 2-D data")
            if grid_size < 2:
                raise click.UsageError("--grid must be at least 2")
            pts = _grid(ds.x, grid_size)
            rows = []
            for variant, sch in (("centered", scheme), ("noncentered", CenteringScheme.none())):
                model = kpca_fit(k, sch, m, normalization, ds.x, spec)
                vals = kpca_transform(model, pts)
                for c in range(m):
                    rows.extend((variant, c + 1, pts[0, j], pts[1, j], vals[c, j])
                                for j in range(pts.shape[1]))
            _emit(_csv(["variant", "component", "x", "y", "value"], rows), output)
            return
        model = kpca_fit(k, scheme, m, normalization, ds.x, spec)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    if (fmt or "json") == "json":
        _emit(_json({"dataset": ds.name, **model.to_dict()}), output)
    else:
        scores = kpca_transform(model, ds.x)
        _emit(_csv([f"pc{c + 1}" for c in range(m)], scores.T.tolist()), output)


@main.command()
@data_options
@click.option("-m", "m", type=int, default=3, show_default=True)
def keca(dataset, input_path, labels, delimiter, n_samples, noise, seed, kernel_text, center,
         weights_path, fmt, output, m):
    """Entropy terms λᵢ(αᵢᵀ1)²/n² of the non-centered Gram matrix and the selection."""
    ds = _load(dataset, input_path, labels, delimiter, n_samples, noise, seed)
    spec = _kernel(kernel_text)
    k = gram_matrix(ds.x, spec)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        ent = keca_decompose(k, m)
    for w in caught:
        click.echo(f"warning: {w.message}", err=True)
    top_eig = list(range(min(m, ds.n)))
    if (fmt or "csv") == "csv":
        sel = set(ent.selected)
        text = _csv(["index", "eigenvalue", "term", "selected"],
                    [(i + 1, ent.eigenvalues[i], ent.terms[i], int(i in sel)) for i in range(ds.n)])
    else:
        text = _json({"dataset": ds.name, "kernel": spec.to_dict(), **ent.to_dict(),
                      "grand_sum_total": mean_norm_sq_from_gram(k),
                      "top_eigenvalue_indices": top_eig})
    _emit(text, output)
    click.echo(f"selected (1-based): {[i + 1 for i in ent.selected]}; "
               f"top eigenvalues: {[i + 1 for i in top_eig]}", err=True)


@main.command()
@click.option("--distances", "dist_path", type=click.Path(path_type=Path), default=None,
              help="square distance-matrix CSV")
@click.option("--dataset", type=click.Choice(["iris", "banana"]), default=None)
@click.option("--input", "input_path", type=click.Path(path_type=Path), default=None)
@click.option("--labels/--no-labels", default=False)
@click.option("--delimiter", default=",", show_default=True)
@click.option("--n", "n_samples", type=int, default=200, show_default=True)
@click.option("--noise", type=float, default=0.2, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-m", "m", type=int, default=2, show_default=True)
@click.option("--bias", type=float, default=None, help="add a constant to Δ before centering")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default=None)
@click.option("-o", "--output", type=click.Path(path_type=Path), default=None)
def mds(dist_path, dataset, input_path, labels, delimiter, n_samples, noise, seed, m, bias, fmt,
        output):
    """Classical MDS from a distance matrix (or from data).

    CSV output has one embedded sample per row; the distance round-trip
    report goes to stderr.  JSON output holds both.
    """
    sources = [dist_path, dataset, input_path]
    if sum(s is not None for s in sources) != 1:
        raise click.UsageError("give exactly one of --distances, --dataset or --input")
    if dist_path is not None:
        try:
            d = load_csv(dist_path, delimiter=delimiter).x.T
        except OSError as exc:
            raise InputError(f"cannot read {dist_path}: {exc.strerror or exc}") from None
        except DataFileError as exc:
            raise InputError(str(exc)) from None
        name = dist_path.stem
    else:
        ds = _load(dataset, input_path, labels, delimiter, n_samples, noise, seed)
        d = np.sqrt(sq_distances(ds.x))
        name = ds.name
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            emb = mds_embed(d, m, bias=bias)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    for w in caught:
        click.echo(f"warning: {w.message}", err=True)
    recon = np.sqrt(sq_distances(emb.points)) if emb.points.size else np.zeros_like(d)
    err = float(np.max(np.abs(recon - d))) / max(float(np.max(d)), 1e-300) if d.size else 0.0
    report = {"max_relative_distance_error": err, "components": int(emb.points.shape[0]),
              "discarded_negative_mass": emb.discarded_negative_mass, "clamped": emb.clamped}
    if (fmt or "csv") == "csv":
        header = [f"x{c + 1}" for c in range(emb.points.shape[0])]
        _emit(_csv(header, emb.points.T.tolist()), output)
        click.echo(_json(report), err=True, nl=False)
    else:
        _emit(_json({"source": name, **emb.to_dict(), "roundtrip": report}), output)


@main.command("banana-gen")
@click.option("--n", "n_samples", type=int, default=200, show_default=True)
@click.option("--noise", type=float, default=0.2, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-o", "--output", type=click.Path(path_type=Path), default=None)
def banana_gen(n_samples, noise, seed, output):
    """Write a banana-shaped dataset as CSV (columns x, y)."""
    try:
        ds = banana(n_samples, noise, seed)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    if output is None:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "y"])
        for i in range(ds.n):
            w.writerow([repr(float(v)) for v in ds.x[:, i]])
        click.echo(buf.getvalue(), nl=False)
        return
    try:
        output.parent.mkdir(parents=True, exist_ok=True)
        write_csv(output, ds.x, header=["x", "y"])
    except OSError as exc:
        raise InputError(f"cannot write {output}: {exc.strerror or exc}") from None


if __name__ == "__main__":
    main()
