# Always prefer setuptools over distutils
from setuptools import setup, find_packages
import pathlib

here = pathlib.Path(__file__).parent.resolve()

long_description = (here / 'README.md').read_text(encoding='utf-8')

setup(
    name='vlines',

    version='0.1.0',

    description='Vanishing lines in spectral sequences of towers of chain complexes over F_p.',

    long_description=long_description,
    long_description_content_type='text/markdown',

    classifiers=[
        #   3 - Alpha
        #   4 - Beta
        #   5 - Production/Stable
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Mathematics',
        'License :: OSI Approved :: MIT License',
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
    ],

    keywords='spectral sequence, exact couple, vanishing line, chain complex',

    package_dir={'': 'src'},
    packages=find_packages(where='src'),  # Required

    python_requires='>=3.9',

    install_requires=(here / 'requirements.in').read_text(encoding='utf-8').split('\n'),

    entry_points={  # Optional
        'console_scripts': [
            'vlines=vlines.cli:main'
        ],
    },
)
