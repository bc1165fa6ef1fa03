#include "axiscat/common.hpp"
