import os
import sys

# make the suite runnable from a bare checkout, without an editable install
sys.path.insert(0, os.path.join(os.path.dirname(__file__), os.pardir, "src"))
