# Configuration file for the Sphinx documentation builder.
#
# This file only contains a selection of the most common options. For a full
# list see the documentation:
# http://www.sphinx-doc.org/en/master/config

# -- Path setup --------------------------------------------------------------

import os
import sys

sys.path.insert(0, os.path.abspath("../src"))


# -- General configuration ---------------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.doctest",
    "sphinx.ext.intersphinx",
    "sphinx.ext.coverage",
    "sphinx.ext.mathjax",
    "sphinx.ext.viewcode",
    "sphinx.ext.githubpages",
    "sphinx.ext.napoleon",
]

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"

project = "expansive"
copyright = "2026, The expansive developers"
author = "The expansive developers"

version = {}
with open("../src/expansive/version.py", "r") as f:
    exec(f.read(), version)

version = version["__version__"]
if version.count(".") > 1:
    version = ".".join(version.split(".")[:-1])

release = version

language = None

exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]

pygments_style = "sphinx"

todo_include_todos = False

napoleon_numpy_docstring = True
napoleon_google_docstring = False


# -- Options for HTML output -------------------------------------------------

html_theme = "sphinx_rtd_theme"

html_static_path = ["_static"]

html_sidebars = {"**": ["relations.html", "searchbox.html"]}

htmlhelp_basename = "expansivedoc"


# -- Options for LaTeX output ------------------------------------------------

latex_documents = [
    (
        master_doc,
        "expansive.tex",
        "expansive Documentation",
        author,
        "manual",
    )
]


# -- Options for manual page output ------------------------------------------

man_pages = [
    (master_doc, "expansive", "expansive Documentation", [author], 1)
]


# -- Extension configuration -------------------------------------------------

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "scipy": ("https://docs.scipy.org/doc/scipy/", None),
}
