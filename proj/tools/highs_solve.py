#!/usr/bin/env python3
# Copyright 2026 The emdarp Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""Solve an MPS file with HiGHS and write "name value" lines.

Usage: highs_solve.py MODEL.mps SOLUTION.sol [--time-limit S] [--threads N]

Exit codes: 0 optimal, 2 infeasible, 3 stopped with an incumbent,
4 stopped without one, 5 anything else.
"""

import argparse
import re
import sys

import highspy


def objective_offset(path):
    pat = re.compile(r"^\*\s*objective offset\s+(\S+)")
    with open(path) as f:
        for line in f:
            m = pat.match(line)
            if m:
                return float(m.group(1))
            if line.startswith("ROWS"):
                break
    return 0.0


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("model")
    ap.add_argument("solution")
    ap.add_argument("--time-limit", type=float, default=0.0)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("threads", args.threads)
    # Big-M rows let loose integrality buy real objective; keep it tight.
    h.setOptionValue("mip_rel_gap", 0.0)
    h.setOptionValue("mip_abs_gap", 1e-9)
    h.setOptionValue("mip_feasibility_tolerance", 1e-9)
    h.setOptionValue("primal_feasibility_tolerance", 1e-9)
    h.setOptionValue("random_seed", 0)
    if args.time_limit > 0:
        h.setOptionValue("time_limit", args.time_limit)
    if h.readModel(args.model) != highspy.HighsStatus.kOk:
        print("cannot read " + args.model, file=sys.stderr)
        return 5
    h.run()

    status = h.getModelStatus()
    ms = highspy.HighsModelStatus
    info = h.getInfo()
    has_solution = info.primal_solution_status == 2
    if status == ms.kInfeasible:
        return 2
    if status == ms.kOptimal:
        code = 0
    elif status in (ms.kTimeLimit, ms.kIterationLimit, ms.kSolutionLimit, ms.kInterrupt):
        code = 3 if has_solution else 4
    else:
        print("solver status " + h.modelStatusToString(status), file=sys.stderr)
        return 5
    if not has_solution:
        return code

    names = h.getLp().col_names_
    values = h.getSolution().col_value
    with open(args.solution, "w") as f:
        f.write("objective %.17g\n" % (info.objective_function_value + objective_offset(args.model)))
        for name, v in zip(names, values):
            if v != 0.0:
                f.write("%s %.17g\n" % (name, v))
    return code


if __name__ == "__main__":
    sys.exit(main())
