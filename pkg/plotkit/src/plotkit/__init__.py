"""Turn spectrum CSVs (ordering,cut,index,sigma) into log-scale figures:
singular value vs. index, one curve per ordering label."""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

__version__ = "0.1.0"

EXPECTED_HEADER = ["ordering", "cut", "index", "sigma"]


class CsvFormatError(ValueError):
    pass


@dataclass
class CurveSet:
    """Per-label (index, sigma) point lists, zeros dropped for log scale."""

    curves: dict[str, list[tuple[int, float]]] = field(default_factory=dict)
    dropped_zeros: int = 0

    def labels(self) -> list[str]:
        return list(self.curves)


def load_csv(path: str | Path) -> CurveSet:
    """Group rows by ordering label; malformed rows error with line numbers."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvFormatError(f"{path}: empty file, expected header "
                                 f"{','.join(EXPECTED_HEADER)}") from None
        if header != EXPECTED_HEADER:
            raise CsvFormatError(f"{path}:1: bad header {header!r}")
        out = CurveSet()
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 4:
                raise CsvFormatError(f"{path}:{lineno}: expected 4 fields, got {len(row)}")
            label = row[0]
            try:
                index = int(row[2])
                sigma = float(row[3])
            except ValueError:
                raise CsvFormatError(f"{path}:{lineno}: non-numeric index/sigma "
                                     f"{row[2]!r},{row[3]!r}") from None
            if sigma == 0.0:
                out.dropped_zeros += 1
                continue
            if sigma < 0.0:
                raise CsvFormatError(f"{path}:{lineno}: negative sigma {sigma}")
            out.curves.setdefault(label, []).append((index, sigma))
    for label, pts in out.curves.items():
        pts.sort()
        if [i for i, _ in pts] != list(range(pts[0][0], pts[0][0] + len(pts))):
            raise CsvFormatError(f"{path}: indices for {label!r} are not contiguous")
    if not out.curves:
        print(f"warning: {path} holds no data rows", file=sys.stderr)
    return out


def render(curves: CurveSet, out_path: str | Path, title: str = ""):
    """Semilog-y plot of each curve; returns the saved path and the figure.

    The number of dropped zero singular values is annotated in the margin so
    a full-rank claim stays visually checkable.
    """
    if not curves.curves:
        raise ValueError("nothing to plot: empty curve set")
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for label, pts in curves.curves.items():
        xs = [i for i, _ in pts]
        ys = [s for _, s in pts]
        ax.semilogy(xs, ys, marker=".", linestyle="-", label=label)
    ax.set_xlabel("singular value index")
    ax.set_ylabel("singular value")
    ax.set_xlim(left=1)
    if title:
        ax.set_title(title)
    ax.legend()
    fig.text(0.01, 0.01, f"dropped zeros: {curves.dropped_zeros}", fontsize=7)
    out_path = Path(out_path)
    fig.savefig(out_path)
    return out_path, fig


def extract_points(fig) -> dict[str, list[list[float]]]:
    """Plotted point sets per legend label (for golden-file comparison)."""
    ax = fig.axes[0]
    return {
        line.get_label(): [[float(x), float(y)] for x, y in zip(*line.get_data())]
        for line in ax.lines
    }


def main(argv=None) -> int:
    p = argparse.ArgumentParser(prog="plot-spectrum", description=__doc__)
    p.add_argument("--csv", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--title", default="")
    args = p.parse_args(argv)
    try:
        curves = load_csv(args.csv)
        render(curves, args.out, args.title)
    except (CsvFormatError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
