#include <pybind11/pybind11.h>

namespace py = pybind11;

PYBIND11_MODULE(_meritum, m) {
  m.doc() = "debate outcome prediction core";
  m.attr("__version__") = "0.1.0";
}
