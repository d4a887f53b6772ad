import pytest

from langtrotter import _kernels

KERNEL_NAMES = ("batch_traces", "fill_trace_table", "box_hits", "class_number", "trace_histogram")

from acceptance_log import RESULTS as ACCEPTANCE


@pytest.fixture(params=sorted(_kernels.BACKENDS))
def backend(request, monkeypatch):
    """Run the test once per available kernel backend."""
    from langtrotter import classnum, curves

    impl = _kernels.BACKENDS[request.param]
    for name in KERNEL_NAMES:
        monkeypatch.setattr(_kernels, name, getattr(impl, name))
    curves.trace_table.cache_clear()
    monkeypatch.setattr(classnum, "_h_memo", {})
    monkeypatch.setattr(classnum, "_H_MEMO", {})
    yield request.param
    curves.trace_table.cache_clear()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=str):
        status, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {status} - {detail}")
