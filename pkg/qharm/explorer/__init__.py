from qharm.explorer.bisection import gap_bisection
from qharm.explorer.config import QGrid, SweepConfig
from qharm.explorer.critical import EmpiricalProfile, empirical_critical_exponents, empirical_profile
from qharm.explorer.sweep import SWEEP_COLUMNS, SweepRow, SweepTable, build_ensemble, sweep
