import os

LOG_LEVEL = os.environ.get("PASCAL_FORMS_LOG_LEVEL", "WARNING").upper()

# largest n accepted by the brute-force cycle-partition oracle
ENUMERATION_CAP = int(os.environ.get("PASCAL_FORMS_ENUMERATION_CAP", "9"))

RANDOM_SEED = int(os.environ.get("PASCAL_FORMS_RANDOM_SEED", "20240601"))
CONVOLUTION_TRIALS = int(os.environ.get("PASCAL_FORMS_CONVOLUTION_TRIALS", "100"))
