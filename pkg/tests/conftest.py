import os
from pathlib import Path

# cache fine-grid references next to the repo so repeated runs are cheap
os.environ.setdefault(
    "PRMWENO_REF_CACHE",
    str(Path(__file__).resolve().parent.parent / ".ref_cache"),
)
