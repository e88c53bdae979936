#pragma once

#include "ssix/audit.hpp"
#include "ssix/bits.hpp"
#include "ssix/error.hpp"
#include "ssix/index.hpp"
#include "ssix/mmphf.hpp"
#include "ssix/oracle.hpp"
#include "ssix/perm.hpp"
#include "ssix/pred.hpp"
#include "ssix/text.hpp"
