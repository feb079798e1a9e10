# Copyright 2026 The phlat Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ==============================================================================

"""Install script for setuptools."""

import os
from setuptools import find_namespace_packages
from setuptools import setup

_CURRENT_DIR = os.path.dirname(os.path.abspath(__file__))


def _get_version():
  with open(os.path.join(_CURRENT_DIR, 'phlat', '__init__.py')) as fp:
    for line in fp:
      if line.startswith('__version__') and '=' in line:
        return line.split('=', 1)[1].strip(' \'"\n')
  raise ValueError('`__version__` not defined in `phlat/__init__.py`')


def _parse_requirements(name):
  with open(os.path.join(_CURRENT_DIR, 'requirements', name)) as f:
    return [line.strip() for line in f
            if line.strip() and not line.startswith('#')]


setup(
    name='phlat',
    version=_get_version(),
    license='Apache 2.0',
    description='Permutation-Hermite equivalence of integer matrices.',
    long_description=open(os.path.join(_CURRENT_DIR, 'README.md')).read(),
    long_description_content_type='text/markdown',
    keywords='integer matrices hermite normal form lattices',
    packages=find_namespace_packages(include=['phlat', 'phlat.*']),
    package_data={'phlat': ['schemas/*.json']},
    entry_points={'console_scripts': ['phlat=phlat._src.cli:run']},
    install_requires=_parse_requirements('requirements.txt'),
    extras_require={'test': _parse_requirements('requirements-test.txt')},
    python_requires='>=3.9',
    classifiers=[
        'Development Status :: 4 - Beta',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: Apache Software License',
        'Operating System :: POSIX :: Linux',
        'Operating System :: Microsoft :: Windows',
        'Operating System :: MacOS :: MacOS X',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
)
