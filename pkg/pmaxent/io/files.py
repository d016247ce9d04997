"""Filesystem helpers for paths, folders and payload output.

The command line writes JSON reports and CSV tables either to stdout or to
a file given by ``--out``; these helpers keep that in one place.
"""

from pathlib import Path
import sys


def exists(path) -> bool:
    """Check path or file exists."""
    if not path: return False
    return Path(path).exists()


def abspath(cur_file, parent=0) -> str:
    """Absolute path.

    Args:
        cur_file: __file__ or file or path str
        parent: level of parent to look for

    Returns:
        str: Absolute path in POSIX style.
    """
    p = Path(cur_file)
    cur_path = p.parent if p.is_file() else p
    if parent == 0: return cur_path.as_posix()
    return abspath(cur_file=cur_path.parent, parent=parent - 1)


def create_folder(path_name: str, is_file=False):
    """Make folder as well as all parent folders if not exists.

    Args:
        path_name: full path name
        is_file: whether input is name of file
    """
    p = Path(path_name).parent if is_file else Path(path_name)
    p.mkdir(parents=True, exist_ok=True)


def write_text(payload: str, out: str | None = None):
    """Write a text payload to ``out`` or stdout.

    Args:
        payload: text to write; a trailing newline is added if missing
        out: output file; ``None`` or ``'-'`` writes to stdout
    """
    if not payload.endswith('\n'): payload += '\n'
    if out in (None, '', '-'):
        sys.stdout.write(payload)
        sys.stdout.flush()
        return
    create_folder(out, is_file=True)
    # newline='' keeps \n line endings byte-identical across platforms
    with open(out, 'w', encoding='utf-8', newline='') as fp:
        fp.write(payload)


def read_text(path: str) -> str:
    """Read a UTF-8 text file."""
    return Path(path).read_text(encoding='utf-8')
