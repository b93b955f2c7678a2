#pragma once

#include "kogsvd2/classify.hpp"
#include "kogsvd2/epair.hpp"
#include "kogsvd2/extfloat.hpp"
#include "kogsvd2/fpcore.hpp"
#include "kogsvd2/harness.hpp"
#include "kogsvd2/lasv2.hpp"
#include "kogsvd2/oracle.hpp"
#include "kogsvd2/svd2.hpp"
