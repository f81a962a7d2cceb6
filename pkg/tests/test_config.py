import logging
from datetime import datetime

from config.config import Config
from src.utils.logging import REPORT_LOGGER, ReportFormatter, log_result, setup_logging


def test_default_settings():
    config = Config()
    assert config.capacity_ells == [4, 6, 8, 10, 12, 14]
    assert config.enumeration_settings["first_n"] == 6
    assert config.cli_settings["dyck_s"] == 3
    assert config.section("missing") == {}


def test_settings_file_from_environment(tmp_path, monkeypatch):
    path = tmp_path / "settings.yaml"
    path.write_text("capacity:\n  ell_range: [4, 8, 4]\nlogging:\n  level: DEBUG\n")
    monkeypatch.setenv("LBCODE_SETTINGS", str(path))
    monkeypatch.delenv("LBCODE_LOG_DIR", raising=False)
    monkeypatch.delenv("LBCODE_LOG_LEVEL", raising=False)
    config = Config()
    assert config.capacity_ells == [4, 8]
    assert config.logging_settings == {"level": "DEBUG", "directory": "logs"}
    assert config.search_settings == {}


def test_log_overrides_from_environment(monkeypatch):
    monkeypatch.setenv("LBCODE_LOG_DIR", "/tmp/lbcode-logs")
    monkeypatch.setenv("LBCODE_LOG_LEVEL", "WARNING")
    settings = Config().logging_settings
    assert settings == {"level": "WARNING", "directory": "/tmp/lbcode-logs"}


class _Capture(logging.Handler):
    def __init__(self):
        super().__init__()
        self.records = []

    def emit(self, record):
        self.records.append(record)


def test_report_formatter():
    logger = logging.getLogger("test.report")
    logger.propagate = False
    logger.setLevel(logging.INFO)
    capture = _Capture()
    logger.addHandler(capture)
    try:
        stamp = datetime(2026, 1, 2, 3, 4).timestamp()
        log_result(logger, "search", timestamp=stamp, m=13, rate=0.8461538)
    finally:
        logger.removeHandler(capture)
    line = ReportFormatter().format(capture.records[0])
    assert line == "02/01/2026 03:04 | search | m: 13 | rate: 0.846"


def test_plain_records_use_default_format():
    record = logging.LogRecord("x", logging.INFO, __file__, 1, "plain message", None, None)
    assert ReportFormatter().format(record) == "plain message"


def test_setup_logging(tmp_path):
    report = setup_logging(tmp_path / "logs", "DEBUG")
    assert report is logging.getLogger(REPORT_LOGGER)
    assert not report.propagate
    assert len(report.handlers) == 2
    assert logging.getLogger().level == logging.DEBUG
    for name in ("numpy", "scipy"):
        assert logging.getLogger(name).level == logging.WARNING
    log_result(report, "count", n_max=4)
    logging.getLogger("src.capacity").info("technical line")
    assert "| count | n_max: 4" in (tmp_path / "logs" / "report.log").read_text()
    technical = (tmp_path / "logs" / "lbcode.log").read_text()
    assert "src.capacity - INFO - technical line" in technical
    assert "count" not in technical
