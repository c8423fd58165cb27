"""Robot, grid and field components and the case studies built on them."""

from .cases import CASES, CaseReport, run_case, run_case_grid_division, run_case_sort, run_case_update
from .field import FieldSpec, SortProperty, SurrogateField, c_sorted, gen_grid, joint_schedules
from .robots import BehaviorBoundExceeded, RobotSpec, gen_robot, gen_swap
