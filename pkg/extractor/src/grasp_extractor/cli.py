import argparse
import sys

from .backbones import BACKBONES, WEIGHTS_MODES
from .errors import ExtractorError
from .extract import extract


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grasp-extractor",
        description="Export pooled backbone features to a GFEA file",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("extract", help="images + labels CSV -> feature file")
    p.add_argument("--images", required=True, help="directory of .ppm/.pgm images")
    p.add_argument("--labels", required=True, help="image_file,p0..p4 CSV")
    p.add_argument("--backbone", required=True, choices=sorted(BACKBONES))
    p.add_argument("--out", required=True, help="output .gfea path")
    p.add_argument("--weights", default="auto", choices=WEIGHTS_MODES)
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        n, used = extract(
            args.images, args.labels, args.backbone, args.out, weights=args.weights
        )
    except (ExtractorError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.weights == "auto" and used == "random":
        print(
            "warning: imagenet weights unavailable, used random initialization",
            file=sys.stderr,
        )
    dim = BACKBONES[args.backbone].feature_dim
    print(f"wrote {n} feature rows ({dim} dims, {args.backbone}) -> {args.out}")
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
