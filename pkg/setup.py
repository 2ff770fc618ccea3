"""Build the optional compiled scanner kernel.

The package works without it: wiktmrd.wikitext falls back to the pure-Python
kernel when the extension is missing or fails to build.
"""
from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Never fail the install over the speedup module."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: compiled kernel skipped ({exc}); pure-Python fallback will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); pure-Python fallback will be used")


try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("wiktmrd.wikitext._kernel_cy", ["src/wiktmrd/wikitext/_kernel_cy.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
