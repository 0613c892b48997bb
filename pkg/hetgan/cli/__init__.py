from .config import DataConfig, OutputConfig, RunConfig, SweepConfig
from .commands import build_parser, main, pattern_map

__all__ = [s for s in dir()]  # add imported cli tools to __all__
