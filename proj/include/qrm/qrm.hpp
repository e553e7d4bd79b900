// qrm.hpp — umbrella header.

#pragma once

#include "qrm/bargmann.hpp"
#include "qrm/eigensolve.hpp"
#include "qrm/io.hpp"
#include "qrm/model.hpp"
#include "qrm/recurrence.hpp"
#include "qrm/zhang.hpp"
