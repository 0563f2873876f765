import logging
from pathlib import Path

import pandas as pd

from src.credit.exceptions import ExposureError, PortfolioFileError
from src.credit.schemas import Obligor, PortfolioSpec

REQUIRED_COLUMNS = ("exposure", "alpha", "z")
OPTIONAL_COLUMNS = ("name",)


class PortfolioRepository:
    """Loads obligor portfolios from delimited text files.

    The file needs a header row with the columns ``exposure``, ``alpha`` and ``z``;
    a ``name`` column is optional. One row per obligor.
    """

    def __init__(self, path: Path | str):
        self.path = Path(path)
        self.logger = logging.getLogger(__name__)

    def _read_frame(self) -> pd.DataFrame:
        if not self.path.is_file():
            raise PortfolioFileError(self.path, "file does not exist")
        try:
            frame = pd.read_csv(self.path, skipinitialspace=True)
        except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
            raise PortfolioFileError(self.path, str(e)) from e

        frame.columns = [str(column).strip().lower() for column in frame.columns]
        missing = [column for column in REQUIRED_COLUMNS if column not in frame.columns]
        if missing:
            raise PortfolioFileError(self.path, f"missing columns {', '.join(missing)}")
        unknown = set(frame.columns) - set(REQUIRED_COLUMNS) - set(OPTIONAL_COLUMNS)
        if unknown:
            raise PortfolioFileError(self.path, f"unknown columns {', '.join(sorted(unknown))}")
        if frame.empty:
            raise PortfolioFileError(self.path, "no obligors")
        return frame

    def load(self, auto_normalize: bool = False) -> PortfolioSpec:
        """Read the portfolio, optionally dividing exposures by the largest one.

        Args:
            auto_normalize: Rescale so that max E_i = 1 instead of rejecting E_i > 1

        Returns:
            PortfolioSpec: Validated portfolio

        Raises:
            PortfolioFileError: If the file is missing, malformed, or holds non-numeric values
            ExposureError: If an exposure is outside (0, 1] and auto_normalize is off
        """
        frame = self._read_frame()
        try:
            numeric = frame[list(REQUIRED_COLUMNS)].apply(pd.to_numeric, errors="raise")
        except (ValueError, TypeError) as e:
            raise PortfolioFileError(self.path, f"non-numeric value: {e}") from e
        if numeric.isna().any().any():
            raise PortfolioFileError(self.path, "empty cells are not allowed")

        names = (
            frame["name"].astype(str).str.strip().tolist()
            if "name" in frame.columns
            else [None] * len(frame)
        )
        exposures = numeric["exposure"]
        if auto_normalize and exposures.max() > 0:
            scale = float(exposures.max())
            exposures = exposures / scale
            self.logger.info(f"Exposures of {self.path.name} divided by {scale}")

        for index, exposure in enumerate(exposures):
            if not 0.0 < exposure <= 1.0:
                raise ExposureError(names[index] or f"#{index + 1}", float(exposure))

        obligors = tuple(
            Obligor(
                exposure=float(exposure),
                alpha=float(alpha),
                z=float(z),
                name=name,
            )
            for exposure, alpha, z, name in zip(exposures, numeric["alpha"], numeric["z"], names)
        )
        self.logger.info(f"Loaded {len(obligors)} obligors from {self.path}")
        return PortfolioSpec(obligors=obligors)
