from enum import Enum
from glob_utils.directory.inout_dir import DefaultDir, set_default_dir
import os
import pathlib
import logging

logger = logging.getLogger(__name__)

################################################################################
# management of global default directory
################################################################################

DEFAULT_APP_DIR_FILE = "app_default_dirs.txt"
APP_DIRS = DefaultDir()
PACKAGE_DIR = pathlib.Path(__file__).parent.parent.resolve()
REPORTS_ENV = "DQ_WORKBENCH_REPORTS"

_initialised = False


class AppStdDir(Enum):
    golden = "Golden Scenarios"
    reports = "Reports"


def set_default_dirs(reset: bool = False, reports: str = None) -> None:
    """Initialise the standard directories once per process; the golden
    folder follows the installed package, the report folder comes from
    `reports`, the DQ_WORKBENCH_REPORTS environment variable or ./reports"""
    global _initialised
    if _initialised and not reset and reports is None:
        return
    local_dir = pathlib.Path(__file__).parent.resolve()
    path = os.path.join(local_dir, DEFAULT_APP_DIR_FILE)
    init_dirs = {
        AppStdDir.golden.value: str(PACKAGE_DIR / "scenarios" / "golden"),
        AppStdDir.reports.value: reports or os.environ.get(REPORTS_ENV) or os.path.abspath("reports"),
    }
    set_default_dir(True, APP_DIRS, init_dirs, path)
    _initialised = True


def get_dir(dir: AppStdDir) -> str:
    set_default_dirs()
    return APP_DIRS.get(dir.value)


if __name__ == "__main__":
    """"""
    from glob_utils.log.log import main_log

    main_log()
    set_default_dirs(reset=True)
    print(AppStdDir.golden.value)
    print(APP_DIRS.get())
    print(get_dir(AppStdDir.golden))
