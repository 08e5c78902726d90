import json
import os
import subprocess
import sys

import pytest
from hypothesis import settings

from toric_hms.exceptional import build_blowup_algebra
from toric_hms.fukaya import build_category
from toric_hms.resources import load_default_config
from toric_hms.verifier import find_signed_equivalence

settings.register_profile("default", deadline=None)
settings.load_profile("default")

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, text = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        # a criterion split over several tests passes only if all of them do
        status = "PASS" if rep.outcome == "passed" else "FAIL"
        if _CRITERIA.get(n, ("PASS",))[0] == "FAIL":
            status = "FAIL"
        _CRITERIA[n] = (status, text)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        status, text = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {text}")


@pytest.fixture(scope="session")
def blowup():
    return build_blowup_algebra()


@pytest.fixture(scope="session")
def default_cfg():
    return load_default_config()


@pytest.fixture(scope="session")
def default_fp(default_cfg):
    return build_category(default_cfg)


@pytest.fixture(scope="session")
def default_cert(default_fp, blowup):
    cert = find_signed_equivalence(default_fp.algebra, blowup)
    assert cert is not None
    return cert


def point_of(cert, pair, label):
    """Index of the intersection point of ``pair`` that the certificate sends to ``label``."""
    for k, (lab, sign) in enumerate(cert.maps[pair]):
        if lab == label:
            return k, sign
    raise KeyError(label)


def cli(*args, threads=None, cwd=None):
    env = dict(os.environ)
    if threads is not None:
        env["HMS_THREADS"] = str(threads)
    proc = subprocess.run(
        [sys.executable, "-m", "toric_hms", *args],
        capture_output=True, text=True, env=env, cwd=cwd,
    )
    doc = None
    if proc.stdout.strip():
        doc = json.loads(proc.stdout)
    return proc.returncode, doc, proc.stdout, proc.stderr
