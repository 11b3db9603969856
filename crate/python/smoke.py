"""Smoke test for the pyvolint extension.

Uses an installed pyvolint if there is one (e.g. after `maturin develop` in
crates/python); otherwise builds the extension with cargo and loads it from
target/.
"""

import importlib.util
import pathlib
import subprocess
import sys
from fractions import Fraction

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    try:
        import pyvolint

        return pyvolint
    except ImportError:
        pass
    subprocess.run(
        ["cargo", "build", "--release", "-p", "volint-python", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    lib = ROOT / "target" / "release" / ("libpyvolint.dylib" if sys.platform == "darwin" else "libpyvolint.so")
    spec = importlib.util.spec_from_file_location("pyvolint", lib)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def main():
    pv = load()

    # elliptic curve at 43: local height of two points
    e = pv.Curve(43, [555015942, -1351755, 0, 1], 6)
    assert e.betti == 1
    h = e.height((2523, 114912), (219, 16416))
    assert str(h) == "29*43 + 28*43^2 + 10*43^3 + 42*43^4 + 19*43^5 + O(43^6)", h
    print("h_43(P, R) =", h)

    # genus 2 curve over Q_5(a), a^4 = 5
    cycles = [[(0, 1), (1, 1), (3, -1), (2, -1)], [(3, -1), (2, -1), (4, 1), (5, 1)]]
    c = pv.Curve(5, [5, 0, -4, 10, -8, 0, 1], 32, modulus=[-5, 0, 0, 0, 1], cycles=cycles)
    assert c.betti == 2
    assert c.etas[0] == ["1/3", "1/3", "-1/6", "-1/6", "-1/6", "-1/6"], c.etas
    per = c.period([0, 0, 0, 1], 1)
    assert str(per).startswith("4 + a^4 + 4*a^8"), per
    val = c.integrate([0, 0, 0, 1], (1, -2), (1, Fraction(2)))
    assert val.precision == 32 and str(val).startswith("1 + 3*a^4 + a^8"), val
    print("period =", per)
    print("integral =", val)

    try:
        pv.Curve(43, [555015942, -1351755.0, 0, 1], 6)
    except TypeError:
        pass
    else:
        raise AssertionError("floats must be refused")
    print("ok")


if __name__ == "__main__":
    main()
