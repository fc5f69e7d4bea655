import json
import pathlib
import sys

import jsonschema

schema = json.loads(pathlib.Path(sys.argv[1]).read_text())
jsonschema.Draft202012Validator.check_schema(schema)
validator = jsonschema.Draft202012Validator(schema)
bad = 0
for path in sorted(pathlib.Path(sys.argv[2]).glob("*.json")):
    for err in validator.iter_errors(json.loads(path.read_text())):
        print(f"{path.name}: {'/'.join(map(str, err.path))}: {err.message}")
        bad += 1
sys.exit(1 if bad else 0)
