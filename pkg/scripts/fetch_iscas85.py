"""Download the larger ISCAS85 netlists in BENCH format.

The files are not redistributed with the package.  Point ``--base-url`` at
any mirror that serves ``<name>.bench`` files, e.g.

    python scripts/fetch_iscas85.py --base-url https://example.org/iscas85 -o circuits/

Each download is parsed before it is kept, so a bad mirror fails loudly.
"""

import argparse
import sys
import urllib.request
from pathlib import Path

from faultloc.circuit import parse_bench
from faultloc.errors import ParseError

CIRCUITS = ("c432", "c499", "c880", "c1355", "c1908", "c2670", "c3540", "c5315", "c6288", "c7552")


def fetch(base_url: str, name: str, timeout: float) -> str:
    url = f"{base_url.rstrip('/')}/{name}.bench"
    with urllib.request.urlopen(url, timeout=timeout) as resp:
        return resp.read().decode("utf-8", errors="replace")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--base-url", required=True, help="directory URL holding <name>.bench files")
    ap.add_argument("-o", "--out-dir", default="circuits")
    ap.add_argument("--only", nargs="+", choices=CIRCUITS, help="subset to download")
    ap.add_argument("--timeout", type=float, default=30.0)
    args = ap.parse_args(argv)

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    failed = 0
    for name in args.only or CIRCUITS:
        try:
            text = fetch(args.base_url, name, args.timeout)
            c = parse_bench(text, name=name, source=f"{name}.bench")
        except (OSError, ParseError) as exc:
            print(f"{name}: {exc}", file=sys.stderr)
            failed += 1
            continue
        (out / f"{name}.bench").write_text(text)
        print(f"{name}: {len(c.inputs)} inputs, {len(c.outputs)} outputs, {len(c.gates)} gates")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
