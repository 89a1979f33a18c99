import logging
import sys


class SimLogger:
    def __init__(self, name: str = "chiral_ring"):
        self._logger = logging.getLogger(name)
        self._logger.setLevel(logging.INFO)

        if not self._logger.handlers:
            handler = logging.StreamHandler(sys.stderr)
            handler.setLevel(logging.DEBUG)
            formatter = logging.Formatter('%(message)s')
            handler.setFormatter(formatter)
            self._logger.addHandler(handler)
            self._logger.propagate = False

    def set_level(self, level: int):
        self._logger.setLevel(level)

    def step(self, msg: str):
        self._logger.info(f"[STEP] {msg}")

    def info(self, msg: str):
        self._logger.info(msg)

    def debug(self, msg: str):
        self._logger.debug(msg)

    def warning(self, msg: str):
        self._logger.warning(f"[WARNING] {msg}")


sim_logger = SimLogger()
logger = sim_logger
