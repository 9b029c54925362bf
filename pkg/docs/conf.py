# Sphinx configuration for the cpskit documentation.

import os
import sys

sys.path.insert(0, os.path.abspath("../src"))

from cpskit import __version__

project = "cpskit"
copyright = "2026, The cpskit developers"
author = "The cpskit developers"
release = __version__

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.napoleon",
    "sphinx.ext.viewcode",
    "sphinx.ext.intersphinx",
    "sphinx.ext.mathjax",
]

exclude_patterns = ["_build"]

html_theme = "furo"

napoleon_google_docstring = True
napoleon_numpy_docstring = False

autodoc_member_order = "bysource"

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable", None),
    "scipy": ("https://docs.scipy.org/doc/scipy", None),
}
