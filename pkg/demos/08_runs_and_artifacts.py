"""Running pipelines programmatically and re-reading their artifacts."""
import json
import tempfile
from pathlib import Path

from wagoner.cli import RunConfig, main, run
from wagoner.export import complex_from_json

out = Path(tempfile.mkdtemp())
manifest, artifacts = run(RunConfig(operation="build", family="SL", n=3, q=2, complex="apartment",
                                    out=str(out)))
print("verdicts:", manifest.verdicts)
print("artifacts:", manifest.artifacts)

cx = complex_from_json((out / "apartment.json").read_text())
print("re-imported", cx.name, cx.f_vector)

# the same run from the command line, this time as a DOT graph
main(["export", "--artifact", str(out / "apartment.json"), "--format", "dot", "--out", str(out)])
print((out / "apartment.dot").read_text().splitlines()[:4])
print(json.loads((out / "manifest-export.json").read_text())["exit_code"])
