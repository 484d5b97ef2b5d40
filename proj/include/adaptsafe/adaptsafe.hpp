#pragma once

#include "adaptsafe/controller.hpp"
#include "adaptsafe/errors.hpp"
#include "adaptsafe/goal.hpp"
#include "adaptsafe/harness.hpp"
#include "adaptsafe/io.hpp"
#include "adaptsafe/knowledge.hpp"
#include "adaptsafe/managed_loop.hpp"
#include "adaptsafe/managing_system.hpp"
#include "adaptsafe/mapek.hpp"
#include "adaptsafe/model.hpp"
#include "adaptsafe/plant.hpp"
#include "adaptsafe/ring_buffer.hpp"
#include "adaptsafe/safety_case.hpp"
#include "adaptsafe/scenario.hpp"
#include "adaptsafe/spi.hpp"
#include "adaptsafe/system.hpp"
#include "adaptsafe/taxonomy.hpp"
#include "adaptsafe/taxonomy_table.hpp"
#include "adaptsafe/validity.hpp"
