"""Smoke test for the `twoweight` extension module.

Builds the cdylib with cargo, copies it next to a temporary import path as
`twoweight.so`, and exercises the main entry points.

    python3 python/smoke_test.py [--release] [--no-build]
"""

import argparse
import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build(release: bool) -> Path:
    cmd = ["cargo", "build", "-p", "twoweight-py", "--features", "extension-module"]
    if release:
        cmd.append("--release")
    subprocess.run(cmd, cwd=ROOT, check=True)
    lib = ROOT / "target" / ("release" if release else "debug") / "libtwoweight_py.so"
    if not lib.exists():
        sys.exit(f"missing {lib}")
    return lib


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--release", action="store_true")
    ap.add_argument("--no-build", action="store_true")
    args = ap.parse_args()

    profile = "release" if args.release else "debug"
    lib = ROOT / "target" / profile / "libtwoweight_py.so" if args.no_build else build(args.release)

    with tempfile.TemporaryDirectory() as tmp:
        shutil.copy(lib, Path(tmp) / "twoweight.so")
        sys.path.insert(0, tmp)
        import twoweight

        assert twoweight.expected_weights(3, 2) == (30, 21)
        assert twoweight.blowup_weights(3, 2, 3) == (21, 30)

        s = twoweight.Space(3, 2)
        assert (s.q, s.n, s.point_count) == (3, 2, 364)
        alg = s.algebraic_set()
        geo = s.geometric_set()
        assert len(alg) == 84 and alg == geo
        assert s.spectrum(alg) == {21: 84, 30: 280}
        assert s.spectrum(s.lambda_set()) == {13: 360, 40: 4}
        assert s.code(alg) == (84, 6, {54: 560, 63: 168})
        assert s.srg(alg) == (729, 168, 27, 42)

        idx = alg.indices()[5]
        assert s.point_index(s.point_coords(idx)) == idx
        assert len(s.spectrum(s.geometric_set([3, 1, 0, 2]))) == 2

        try:
            twoweight.Space(4, 2)
        except ValueError as e:
            assert "prime" in str(e)
        else:
            raise AssertionError("p = 4 accepted")

        passed, cert = twoweight.certify(2, 2, str(Path(tmp) / "out"))
        cert = json.loads(cert)
        assert passed and cert["graph"]["lambda"] == 2 and cert["graph"]["mu"] == 6

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
