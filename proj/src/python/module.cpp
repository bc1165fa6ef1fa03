#include <pybind11/pybind11.h>

PYBIND11_MODULE(_axiscat, m) { m.doc() = "axiscat python bindings"; }
