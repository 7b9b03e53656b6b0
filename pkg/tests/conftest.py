from hypothesis import HealthCheck, settings

# Monte Carlo helpers make individual examples slow; wall-clock deadlines
# would turn load spikes into spurious failures.
settings.register_profile(
    "byzfdr",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("byzfdr")

# One line per statistical acceptance check, replayed after the test
# summary so they stay visible under captured output.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance summary")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
