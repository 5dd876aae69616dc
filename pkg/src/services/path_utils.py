import os
import os.path as op


def split_extension(path: str, default: str) -> tuple[str, str]:
    """
    Splits a path into its stem and extension, using ``default`` when absent.
    Args:
        path (str): The requested output path.
        default (str): Extension to use if the path has none.
    Returns:
        tuple[str, str]: The stem and the extension without its dot.
    """
    stem, extension = op.splitext(path)
    return stem, extension.lstrip(".") or default


def ensure_directory(path: str):
    """Creates the parent directory of ``path`` if needed."""
    parent = op.dirname(op.abspath(path))
    if not op.isdir(parent):
        os.makedirs(parent, exist_ok=True)


def ensure_unique_filename(filename: str, extension: str, overwrite: bool) -> str:
    """
    Ensures that the filename is unique by appending a number if necessary.
    Args:
        filename (str): The base filename to check.
        extension (str): The file extension to use.
        overwrite (bool): Whether to overwrite existing files.
    Returns:
        str: A unique filename, potentially modified with an appended number.
    """
    if not overwrite and op.exists(f"{filename}.{extension}"):
        i = 0
        while True:
            new_filename = f"{filename}_{i}"
            if op.exists(f"{new_filename}.{extension}"):
                i += 1
            else:
                filename = new_filename
                break
    return filename
