import os
from pathlib import Path
from typing import Dict, List, Optional, Union

import yaml
from dotenv import load_dotenv

DEFAULT_SETTINGS = Path(__file__).parent / "settings.yaml"


class Config:
    def __init__(self, config_path: Optional[Union[str, Path]] = None):
        load_dotenv()
        if config_path is None:
            config_path = os.getenv("LBCODE_SETTINGS") or DEFAULT_SETTINGS

        with open(config_path, 'r') as f:
            self.config = yaml.safe_load(f) or {}
        self.path = Path(config_path)

    def section(self, name: str) -> Dict:
        return dict(self.config.get(name) or {})

    @property
    def logging_settings(self) -> Dict:
        settings = {"level": "INFO", "directory": "logs"}
        settings.update(self.section("logging"))
        if os.getenv("LBCODE_LOG_DIR"):
            settings["directory"] = os.getenv("LBCODE_LOG_DIR")
        if os.getenv("LBCODE_LOG_LEVEL"):
            settings["level"] = os.getenv("LBCODE_LOG_LEVEL")
        return settings

    @property
    def capacity_settings(self) -> Dict:
        return self.section("capacity")

    @property
    def enumeration_settings(self) -> Dict:
        return self.section("enumeration")

    @property
    def search_settings(self) -> Dict:
        return self.section("search")

    @property
    def cli_settings(self) -> Dict:
        return self.section("cli")

    @property
    def capacity_ells(self) -> List[int]:
        start, stop, step = self.capacity_settings.get("ell_range", [4, 14, 2])
        return list(range(start, stop + 1, step))
