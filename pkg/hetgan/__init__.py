__version__ = "0.1.0"

import hetgan.tools
import hetgan.nn
import hetgan.networks
import hetgan.losses
import hetgan.training
import hetgan.synthdata
import hetgan.metrics
import hetgan.inference
import hetgan.cli
