from setuptools import find_packages, setup


setup(
    author="fdalign developers",
    python_requires='>=3.10',
    description="Feature-direction alignment for weakly supervised object localization",
    include_package_data=True,
    install_requires=[
        'numpy',
        'pandas',
        'scikit-learn',
        'scikit-image',
        'Pillow',
        'wandb',
        'plotly_express',
        'fasteners',
        'tqdm',
    ],
    keywords='fdalign',
    name='fdalign',
    packages=find_packages(include=['fdalign', 'fdalign.*']),
    entry_points={
        'console_scripts': ['fdalign=fdalign.main:main'],
    },
    version='0.0.1',
)
