"""
Scenarios from Python
=====================

The same JSON files the ``ernstlab run`` command reads can be driven from a
script.  Try ``ernstlab run demos/x1_with_x5.json --out /tmp/out`` for the
command-line version.
"""

from pathlib import Path

from ernstlab.scenario import Scenario, run_scenario

sc = Scenario.load(Path(__file__).with_name("x1_with_x5.json"))
result = run_scenario(sc)
print(result.summary())
print(result.csv_text().splitlines()[:3])
