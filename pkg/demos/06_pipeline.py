"""End-to-end batch run from a config file, as the command line does it.

Equivalent shell session:
    tvprebound simulate --out data.csv --T 200 --w 0.001
    tvprebound run run.ini --profile desk
"""
import json
import tempfile
from pathlib import Path

from tvprebound.cli import main, verify_manifest

root = Path(tempfile.mkdtemp())
main(["simulate", "--out", str(root / "data.csv"), "--T", "200", "--w", "0.001", "--seed", "1"])
(root / "run.ini").write_text("""\
[data]
files = data.csv
activity = activity
energy = energy
price = price
level_variables =

[transform]
log =
hamilton =

[dates]
peaks = 2006-01, 2010-06
troughs = 2008-03, 2012-01

[mcmc]
n_draws = 300   # use profile = desk for a real run
burn_in = 100
seed = 1
""")
main(["run", str(root / "run.ini")])
out = root / "out"
man = json.loads((out / "manifest.json").read_text())
print("status", man["status"], "lag", man["lag"], "files", sorted(man["outputs"]))
print("manifest problems:", verify_manifest(out) or "none")
print((out / "rebound_peaks.txt").read_text())
