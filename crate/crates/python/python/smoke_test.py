"""Smoke test for the pytasp extension module.

Build first with `cargo build -p tasp-python` (or `--release`). The script
finds the shared library under `target/`, or takes its path from the
PYTASP_LIB environment variable.
"""

import importlib.util
import json
import os
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parents[3]
FIXTURES = ROOT / "crates" / "core" / "tests" / "fixtures"


def load_module():
    candidates = [os.environ.get("PYTASP_LIB")] if os.environ.get("PYTASP_LIB") else []
    candidates += [str(ROOT / "target" / p / "libpytasp.so") for p in ("release", "debug")]
    lib = next((c for c in candidates if c and os.path.exists(c)), None)
    if lib is None:
        sys.exit("libpytasp.so not found; run `cargo build -p tasp-python` first")
    tmp = tempfile.mkdtemp()
    target = os.path.join(tmp, "pytasp.so")
    shutil.copy(lib, target)
    spec = importlib.util.spec_from_file_location("pytasp", target)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def main():
    tasp = load_module()
    mail = (FIXTURES / "mail.dom").read_text()
    yale = (FIXTURES / "yale.dom").read_text()

    status, k, trace = tasp.valid(mail, "G (mail(b) -> F ~mail(b))", 5)
    assert (status, k) == ("counterexample", 3), (status, k)
    doc = json.loads(trace)
    assert [s["action"] for s in doc["states"]] == ["begin", "sense_mail(a)", "sense_mail(b)", "deliver(a)"]
    assert all(s["holds"]["mail(b)"] for s in doc["states"])
    assert tasp.eval_trace(trace, "G mail(b)")

    assert tasp.valid(mail, "G (mail(b) -> F ~mail(b))", 2) == ("valid", 2, None)

    status, k, _ = tasp.check(yale, "<-in_sight?; wait; in_sight?; load; shoot> ~alive", 8, dummy=True)
    assert (status, k) == ("witness", 5), (status, k)

    assert len(tasp.extensions(yale, 1, limit=2)) == 2
    assert "eq_last(0)" in tasp.ground("action a.", 0)

    dom, prop, neg = tasp.philosophers(3)
    assert tasp.valid(dom, prop, 6)[:2] == ("counterexample", 5)
    assert tasp.check(dom, neg, 6)[:2] == ("witness", 5)

    oracle, translation, ok = tasp.crosscheck("fluent f. action a. inertial f. law [a] -f.", 1)
    assert ok and oracle == translation > 0, (oracle, translation, ok)

    try:
        tasp.check(mail, "F nosuch", 1)
    except ValueError as e:
        assert "nosuch" in str(e)
    else:
        raise AssertionError("undeclared fluent accepted")

    print("pytasp smoke test passed")


if __name__ == "__main__":
    main()
