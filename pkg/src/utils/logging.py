import logging
from datetime import datetime
from pathlib import Path
from typing import Optional, Union

TECHNICAL_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
REPORT_LOGGER = 'user.report'


class ReportFormatter(logging.Formatter):
    """Custom formatter for one-line command results"""

    def format(self, record):
        if not hasattr(record, 'report'):
            return super().format(record)

        data = dict(record.report)
        timestamp = datetime.fromtimestamp(data.pop('timestamp', record.created))
        command = data.pop('command', 'N/A')
        fields = [f"{key}: {value}" for key, value in data.items()]
        return " | ".join([timestamp.strftime('%d/%m/%Y %H:%M'), command] + fields)


def log_result(logger, command: str, timestamp: Optional[float] = None, **fields):
    """Helper function to log a command result in a friendly format"""
    if timestamp is None:
        timestamp = datetime.now().timestamp()

    extra_data = {'timestamp': timestamp, 'command': command}
    for key, value in fields.items():
        if isinstance(value, float):
            value = f"{value:.3f}"
        extra_data[key] = value

    logger.info("", extra={'report': extra_data})


def setup_logging(log_dir: Union[str, Path] = 'logs', level: Union[str, int] = logging.INFO):
    """Setup logging configuration for both technical logs and result reports"""
    logs_dir = Path(log_dir)
    logs_dir.mkdir(parents=True, exist_ok=True)

    technical_log = logs_dir / 'lbcode.log'
    report_log = logs_dir / 'report.log'

    # Remove any existing handlers to avoid duplicates
    for handler in logging.root.handlers[:]:
        logging.root.removeHandler(handler)
        handler.close()

    # Technical logs go to file only
    logging.basicConfig(
        level=level,
        format=TECHNICAL_FORMAT,
        handlers=[
            logging.FileHandler(technical_log)
        ]
    )

    report_logger = logging.getLogger(REPORT_LOGGER)
    for handler in report_logger.handlers[:]:
        report_logger.removeHandler(handler)
        handler.close()
    report_logger.setLevel(logging.INFO)
    report_logger.propagate = False

    report_handler = logging.FileHandler(report_log)
    report_handler.setFormatter(ReportFormatter())
    report_logger.addHandler(report_handler)

    console_handler = logging.StreamHandler()
    console_handler.setFormatter(ReportFormatter())
    report_logger.addHandler(console_handler)

    # Disable debug logs from other libraries
    logging.getLogger('numpy').setLevel(logging.WARNING)
    logging.getLogger('scipy').setLevel(logging.WARNING)

    return report_logger
