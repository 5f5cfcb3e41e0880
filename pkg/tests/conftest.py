ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(k: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[k] = (ok, detail)
    print(f"criterion {k}: {'PASS' if ok else 'FAIL'} {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'} {detail}")
