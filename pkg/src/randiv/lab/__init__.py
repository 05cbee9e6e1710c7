"""Monte Carlo experiments, run records and the command line."""
from .config import ExperimentConfig
from .experiments import (exp_a_set_growth, exp_gromov_tail, exp_ht_growth, exp_ht_intersection,
                          exp_random_divergence, run_experiment)
from .record import RunRecord, load_run, report
from .stats import Estimate, tail_fit
