from .__version__ import __version__  # noqa
from .base import *  # noqa
from .certificates import *  # noqa
from .chains import *  # noqa
from .cobordism import *  # noqa
from .complexes import *  # noqa
from .constructions import *  # noqa
from .csv import *  # noqa
from .datasets import *  # noqa
from .descriptions import *  # noqa
from .dsl import *  # noqa
from .evaluator import *  # noqa
from .homology import *  # noqa
from .inference import *  # noqa
from .intervals import *  # noqa
from .json import *  # noqa
from .ledger import *  # noqa
from .manifolds import *  # noqa
from .report import *  # noqa
from .rules import *  # noqa
from .snf import *  # noqa
from .subdivisions import *  # noqa
