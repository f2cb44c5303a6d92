import _support


def pytest_terminal_summary(terminalreporter):
    if not _support.ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_support.ACCEPTANCE):
        passed, detail = _support.ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if passed else 'FAIL'}  {detail}")
