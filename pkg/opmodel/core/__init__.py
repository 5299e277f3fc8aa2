from .config import DEFAULT_CONFIG, Config
from .errors import OpmodelError
from .logging import get_logger
