import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

N_CRITERIA = 12
_criteria: dict[int, list[tuple[bool, str]]] = {}


@pytest.fixture
def record():
    """record(n, ok, detail): log one part of acceptance criterion n."""

    def _record(n: int, ok: bool, detail: str) -> bool:
        _criteria.setdefault(n, []).append((bool(ok), detail))
        return bool(ok)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in range(1, N_CRITERIA + 1):
        parts = _criteria.get(n)
        if parts is None:
            tr.write_line(f"CRITERION {n:2d}: NOT RUN")
            continue
        status = "PASS" if all(ok for ok, _ in parts) else "FAIL"
        tr.write_line(f"CRITERION {n:2d}: {status}")
        for ok, detail in parts:
            tr.write_line(f"    [{'ok' if ok else 'FAIL'}] {detail}")
