# Copyright (c) 2024 The pymcrt developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-3-Clause

import os
import re
import sys

# pip3 install wheel
# pip3 install sphinx-autodoc-typehints sphinx_rtd_theme
# sphinx-build -b html pymcrt/doc sphinx

topdir = os.path.abspath(os.path.join(os.path.dirname(__file__),
                                      os.pardir, os.pardir))
sys.path.append(topdir)


def read(where, *parts):
    """
    Build an absolute path from *parts* and and return the contents of the
    resulting file.  Assume UTF-8 encoding.
    """
    with open(os.path.join(where, *parts), 'rt', encoding='utf-8') as f:
        return f.read()


def find_meta(meta):
    """
    Extract __*meta*__ from meta_file.
    """
    meta_match = re.search(rf"^__{meta}__ = ['\"]([^'\"]*)['\"]",
                           meta_file, re.M)
    if meta_match:
        return meta_match.group(1)
    raise RuntimeError(f'Unable to find __{meta}__ string.')


meta_file = read(topdir, 'pymcrt', '__init__.py')

version = find_meta('version')

needs_sphinx = '2.1'
extensions = ['sphinx.ext.autodoc',
              'sphinx.ext.doctest',
              'sphinx.ext.mathjax',
              'sphinx_autodoc_typehints']
templates_path = ['templates']
source_suffix = '.rst'
master_doc = 'index'
project = find_meta('title')
contact = f"{find_meta('author')} <{find_meta('email')}>"
copyright = f'2024, {contact}'
show_authors = True

html_theme = 'sphinx_rtd_theme'
htmlhelp_basename = 'doc'

latex_elements = {
  'papersize': 'a4paper',
  'fncychap': '',
  'releasename': '',
  'classoptions': ',openany,oneside',
}

latex_documents = [
  ('index', f'{project.lower()}.tex',
   f'{project} Documentation',
   contact, 'manual'),
]

man_pages = [
  ('index', project,
   f'{project} Documentation',
   [contact], 1)
]
