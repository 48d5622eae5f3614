from setuptools import setup
from jhsiao.namespace import make_ns

make_ns('jhsiao')
setup(
    name='jhsiao-torusbeam',
    version='0.0.1',
    author='Jason Hsiao',
    author_email='oaishnosaj@gmail.com',
    description='RIS passive beamforming on the N-torus (relaxation, manifold ascent, brute force)',
    packages=['jhsiao', 'jhsiao.torusbeam'],
    install_requires=['numpy', 'scipy'],
    extras_require={'test': ['pytest']},
    entry_points={
        'console_scripts': ['torus-beam = jhsiao.torusbeam.cli:main'],
    },
)
