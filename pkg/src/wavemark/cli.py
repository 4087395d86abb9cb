"""Command-line front end.

Subcommands wire the pipeline end to end: ``synth`` makes a host,
``embed`` watermarks it, ``attack`` degrades it, ``extract`` recovers the
mark, and ``bench`` runs the whole robustness table (clean, compression
thresholds, crops) over one or more hosts.

Errors leave via a one-line machine-parsable ``error: <category>:
<detail>`` on stderr.  Exit codes: 0 success, 2 usage, 3 data/format,
4 capacity/dimension.
"""

import argparse
import csv
import io
import secrets
import sys
from dataclasses import dataclass

from .attacks import CropRect, crop, wavelet_compress
from .errors import CapacityError, DimensionError, FormatError, WavemarkError
from .image_io import (
    quantize,
    read_image,
    read_watermark,
    write_image,
    write_watermark,
)
from .metrics import ber, nc, pearson, psnr
from .synth import KINDS, synthesize_host
from .watermark import DEFAULT_DELTA, embed, extract, load_key, save_key

__all__ = ["main", "BenchRow", "run_bench", "format_text", "format_csv"]

_CSV_HEADER = ("host", "scenario", "param", "psnr_db", "pearson", "nc", "ber_percent")
_FAILED = "FAILED"


class UsageError(WavemarkError):
    """Bad command-line input (both attacks selected, malformed rect, ...)."""


@dataclass(frozen=True)
class BenchRow:
    """One (host, scenario) result with formatted metric fields.

    Metric fields hold the string ``FAILED`` when the scenario's module
    error was caught; the text and CSV views carry identical values.
    """

    host: str
    scenario: str
    param: str
    psnr_db: str
    pearson: str
    nc: str
    ber_percent: str

    def cells(self) -> tuple[str, ...]:
        return (
            self.host,
            self.scenario,
            self.param,
            self.psnr_db,
            self.pearson,
            self.nc,
            self.ber_percent,
        )


def _fmt_psnr(value: float) -> str:
    return "inf" if value == float("inf") else f"{value:.4f}"


def _fresh_seed() -> int:
    return secrets.randbits(64)


def _parse_rect(text: str) -> CropRect:
    parts = text.split(",")
    if len(parts) != 4:
        raise UsageError(f"crop rectangle must be x,y,w,h, got {text!r}")
    try:
        x, y, w, h = (int(p) for p in parts)
    except ValueError:
        raise UsageError(f"crop rectangle must be four integers, got {text!r}") from None
    try:
        return CropRect(x=x, y=y, w=w, h=h)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _parse_thresholds(text: str) -> list[float]:
    try:
        values = [float(p) for p in text.split(",") if p.strip() != ""]
    except ValueError:
        raise UsageError(f"thresholds must be comma-separated numbers, got {text!r}") from None
    if not values or any(v < 0 for v in values):
        raise UsageError(f"thresholds must be >= 0, got {text!r}")
    return values


# ---------------------------------------------------------------------------
# subcommands


def cmd_embed(args) -> int:
    host = read_image(args.host)
    wm = read_watermark(args.watermark)
    seed = args.seed if args.seed is not None else _fresh_seed()
    watermarked, key = embed(host, wm, seed=seed, delta=args.delta)
    write_image(watermarked, args.out_image)
    save_key(key, args.out_key)
    produced = quantize(watermarked)
    print(f"psnr_db={_fmt_psnr(psnr(host, produced))} pearson={pearson(host, produced):.6f}")
    return 0


def cmd_extract(args) -> int:
    image = read_image(args.image)
    key = load_key(args.key)
    recovered = extract(image, key)
    write_watermark(recovered, args.out_watermark)
    return 0


def cmd_attack(args) -> int:
    if (args.compress_t is None) == (args.crop is None):
        raise UsageError("exactly one of --compress-t or --crop is required")
    image = read_image(args.image)
    if args.compress_t is not None:
        result = wavelet_compress(image, args.compress_t)
    else:
        result = crop(image, _parse_rect(args.crop), fill=args.fill)
    write_image(result, args.out)
    return 0


def cmd_synth(args) -> int:
    host = synthesize_host(args.kind, size=args.size, seed=args.seed)
    write_image(host, args.out)
    return 0


def cmd_bench(args) -> int:
    thresholds = _parse_thresholds(args.thresholds)
    rects = None
    if args.crops is not None:
        rects = [_parse_rect(part) for part in args.crops.split(";") if part]
        if not rects:
            raise UsageError("--crops must name at least one rectangle")
    rows = run_bench(
        host_paths=args.hosts,
        wm_path=args.watermark,
        thresholds=thresholds,
        rects=rects,
        seed=args.seed,
        delta=args.delta,
    )
    if args.format == "csv":
        sys.stdout.write(format_csv(rows))
    else:
        sys.stdout.write(format_text(rows))
    return 0


# ---------------------------------------------------------------------------
# bench


def _default_rects(width: int, height: int) -> list[CropRect]:
    # top-left quarter and centered quarter (half extent per axis)
    return [
        CropRect(0, 0, width // 2, height // 2),
        CropRect(width // 4, height // 4, width // 2, height // 2),
    ]


def run_bench(host_paths, wm_path, thresholds, rects=None, seed=None, delta=DEFAULT_DELTA):
    """Embed into each host, run every scenario, and collect metric rows.

    Scenario order per host: clean, each compression threshold, each crop.
    With ``seed`` given, host i embeds with seed + i, so repeated runs are
    byte-identical; otherwise every host draws a fresh random seed.
    """
    wm = read_watermark(wm_path)
    rows: list[BenchRow] = []
    for index, path in enumerate(host_paths):
        host_seed = seed + index if seed is not None else _fresh_seed()
        rows.extend(
            _bench_host(str(path), wm, thresholds, rects, host_seed, delta)
        )
    return rows


def _bench_host(path, wm, thresholds, rects, host_seed, delta) -> list[BenchRow]:
    def failed(scenario: str, param: str) -> BenchRow:
        return BenchRow(path, scenario, param, _FAILED, _FAILED, _FAILED, _FAILED)

    try:
        host = read_image(path)
        watermarked, key = embed(host, wm, seed=host_seed, delta=delta)
        # snap to the 8-bit grid: bench rows describe the file pipeline
        watermarked = quantize(watermarked)
    except (WavemarkError, ValueError, OSError):
        return [failed("embed", "-")]

    scenarios: list[tuple[str, str]] = [("clean", "-")]
    scenarios += [("compress", f"{t:g}") for t in thresholds]
    host_rects = rects if rects is not None else _default_rects(host.width, host.height)
    scenarios += [("crop", f"{r.x},{r.y},{r.w},{r.h}") for r in host_rects]

    rows = []
    for scenario, param in scenarios:
        try:
            if scenario == "clean":
                image = watermarked
            elif scenario == "compress":
                image = quantize(wavelet_compress(watermarked, float(param)))
            else:
                image = quantize(crop(watermarked, _parse_rect(param)))
            recovered = extract(image, key)
            rows.append(
                BenchRow(
                    host=path,
                    scenario=scenario,
                    param=param,
                    psnr_db=_fmt_psnr(psnr(host, image)),
                    pearson=f"{pearson(host, image):.6f}",
                    nc=f"{nc(wm, recovered):.6f}",
                    ber_percent=f"{ber(wm, recovered):.4f}",
                )
            )
        except (WavemarkError, ValueError, OSError):
            rows.append(failed(scenario, param))
    return rows


def format_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CSV_HEADER)
    for row in rows:
        writer.writerow(row.cells())
    return buf.getvalue()


def format_text(rows) -> str:
    table = [_CSV_HEADER] + [row.cells() for row in rows]
    widths = [max(len(line[i]) for line in table) for i in range(len(_CSV_HEADER))]
    lines = [
        "  ".join(cell.ljust(width) for cell, width in zip(line, widths)).rstrip()
        for line in table
    ]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavemark",
        description="Blind LL3-subband image watermarking toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embed", help="embed a watermark into a host image")
    p.add_argument("host", help="host image (PPM)")
    p.add_argument("watermark", help="watermark (PBM or PGM)")
    p.add_argument("out_image", help="output watermarked image (PPM)")
    p.add_argument("out_key", help="output key file")
    p.add_argument("--seed", type=int, default=None, help="64-bit key seed (default: random)")
    p.add_argument("--delta", type=float, default=DEFAULT_DELTA, help="quantization step (default 1/16)")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("extract", help="recover a watermark using its key")
    p.add_argument("image", help="watermarked (possibly attacked) image")
    p.add_argument("key", help="key file written by embed")
    p.add_argument("out_watermark", help="output recovered mark (PBM)")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("attack", help="apply one attack to an image")
    p.add_argument("image", help="input image")
    p.add_argument("out", help="output attacked image")
    p.add_argument("--compress-t", type=float, default=None, metavar="T",
                   help="wavelet-compression threshold on the 0-255 scale")
    p.add_argument("--crop", default=None, metavar="X,Y,W,H",
                   help="blank the given rectangle")
    p.add_argument("--fill", type=float, default=0.0,
                   help="fill value for --crop (default 0 = black)")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("bench", help="robustness benchmark over hosts")
    p.add_argument("hosts", nargs="+", help="host images")
    p.add_argument("watermark", help="watermark (PBM or PGM)")
    p.add_argument("--thresholds", default="3,5,7",
                   help="comma-separated compression thresholds (default 3,5,7)")
    p.add_argument("--crops", default=None, metavar="X,Y,W,H;...",
                   help="semicolon-separated crop rectangles "
                        "(default: top-left and centered quarters)")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--seed", type=int, default=None,
                   help="pin seeds for reproducible output (host i uses seed+i)")
    p.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("synth", help="write a deterministic synthetic host")
    p.add_argument("out", help="output image (PPM)")
    p.add_argument("--size", type=int, default=512)
    p.add_argument("--kind", choices=KINDS, default="gradient")
    p.add_argument("--seed", type=int, default=0, help="seed for --kind noise")
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        return _fail("usage", exc, 2)
    except FormatError as exc:
        return _fail("format", exc, 3)
    except OSError as exc:
        return _fail("io", exc, 3)
    except CapacityError as exc:
        return _fail("capacity", exc, 4)
    except DimensionError as exc:
        return _fail("dimension", exc, 4)
    except ValueError as exc:
        return _fail("usage", exc, 2)


def _fail(category: str, exc: Exception, code: int) -> int:
    print(f"error: {category}: {exc}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
