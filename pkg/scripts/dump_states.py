"""Write every hyper-Bell state (or one, by label) in the text state format."""
import argparse
from pathlib import Path

from hyperbell.state import HyperBellLabel, all_labels, build_hyper_bell, dumps_state

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("outdir")
ap.add_argument("--label", help='e.g. "phi+,psi+,phi+"')
args = ap.parse_args()

out = Path(args.outdir)
out.mkdir(parents=True, exist_ok=True)
labels = [HyperBellLabel.parse(args.label)] if args.label else list(all_labels())
for lab in labels:
    path = out / f"hb_{lab.to_int():02d}.state"
    path.write_text(dumps_state(build_hyper_bell(lab)))
    print(path, lab)
