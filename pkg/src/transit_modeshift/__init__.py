"""
Bus mode-shift scenarios: GTFS and OD inputs, scenario arithmetic, day simulation and CO2 comparison.

``config`` holds the package defaults (fleet, simulation, emissions), see resources/config_template.toml
"""
from pathlib import Path
from pymodaq_utils.logger import set_logger  # to be imported by other modules.

from .utils import Config
config = Config()

__version__ = Path(__file__).parent.joinpath('resources', 'VERSION').read_text(encoding='utf-8').strip()
