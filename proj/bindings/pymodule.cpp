#include <pybind11/pybind11.h>
PYBIND11_MODULE(_wfbm, m) { m.doc() = "stub"; }
