#!/usr/bin/env python
# -*- encoding: utf-8 -*-
"""
A setuptools based setup module.

See:
https://packaging.python.org/guides/distributing-packages-using-setuptools/
"""

# Always prefer setuptools over distutils
import setuptools
import pathlib

from setuptools import find_packages

here = pathlib.Path(__file__).parent.resolve()

# Get the long description from the README file
long_description = (here / 'README.md').read_text(encoding='utf-8')


setuptools.setup(
    name='evidential',  # Required
    version='0.1.0',  # Required
    description=(
        'Belief-function (Dempster-Shafer) toolkit: mass functions, '
        'evidential classifiers and clustering, discounted fusion'
    ),
    long_description=long_description,  # Optional
    long_description_content_type='text/markdown',  # Optional
    classifiers=[  # Optional
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
    ],
    keywords='dempster-shafer, belief functions, evidence theory',  # Optional
    package_dir={'': 'src'},  # Optional
    packages=find_packages('src'),  # Required
    # hydra YAML groups live inside the package
    package_data={'evidential': ['conf/*.yaml', 'conf/**/*.yaml']},
    include_package_data=True,
    zip_safe=False,
    python_requires='>=3.10, <4',
    install_requires=[
        'torch>=1.11.0',
        'numpy>=1.22.3',
        'scipy>=1.8.0',
        'scikit-learn>=1.1.0',
        'pandas>=1.4.0',
        'xarray>=2022.3.0',
        'joblib>=1.1.0',
        'rich>=12.1.0',
        'hydra-core>=1.2.0',
        'omegaconf>=2.2.0',
        'hydra-colorlog>=1.1.0',
    ],
    extras_require={  # Optional
        'test': ['pytest', 'hypothesis'],
    },
    entry_points={  # Optional
        'console_scripts': [
            'evid=evidential.main:main',
        ],
    },
)
