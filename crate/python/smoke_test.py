"""Smoke test for the pyequihom extension.

Build with `cargo build --release -p equihom-py`, then run this script from
the repository root; it loads target/release/libpyequihom.so directly.
"""

import importlib.machinery
import importlib.util
import json
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    for name in ("libpyequihom.so", "libpyequihom.dylib", "pyequihom.pyd"):
        path = ROOT / "target" / "release" / name
        if path.exists():
            loader = importlib.machinery.ExtensionFileLoader("pyequihom", str(path))
            spec = importlib.util.spec_from_loader("pyequihom", loader)
            module = importlib.util.module_from_spec(spec)
            loader.exec_module(module)
            return module
    sys.exit("build the extension first: cargo build --release -p equihom-py")


def main():
    eq = load()

    result = json.loads(eq.bbur(12))
    sections = {s["name"]: s for s in result["sections"]}
    assert [r[0] for r in sections["generators"]["rows"]] == ["y1", "y2", "y3", "y4", "y5"]
    assert sections["relations"]["rows"] == [["y1^2 = a_s*y3"], ["y2^2 = a_s*y5"]]

    assert eq.point_homology(0, -1) == [("C2", "Z/2"), ("e", "0")]
    assert eq.point_homology(-1, 1) == [("C2", "0"), ("e", "Z/2")]

    code, out, err = eq.run(["gset", "prod", "--group", "c4", "--orbits", "C2,C2"])
    assert code == 0 and "2 x C4/C2" in out, err
    code, _, err = eq.run(["demo", "bbur", "--trunc", "40"])
    assert code == 1 and "guard" in err

    try:
        eq.bbur(12, "q")
    except ValueError:
        pass
    else:
        raise AssertionError("bad coefficient ring accepted")

    checks = eq.check()
    for ident, name, passed, detail in checks:
        print(f"criterion {ident:>2} {'PASS' if passed else 'FAIL'}  {name}: {detail}")
    assert len(checks) == 10 and all(c[2] for c in checks)
    print("python smoke test passed")


if __name__ == "__main__":
    main()
