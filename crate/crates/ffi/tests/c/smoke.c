#include <math.h>
#include <stdio.h>
#include <string.h>

#include "birkhoff_heinz.h"

#define CHECK(cond)                                                        \
  do {                                                                     \
    if (!(cond)) {                                                         \
      fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__, #cond,       \
              bh_last_error_message());                                    \
      return 1;                                                            \
    }                                                                      \
  } while (0)

int main(void) {
  BhNorm *norm = NULL;
  CHECK(bh_norm_from_alias("euclid", &norm) == BH_STATUS_OK);

  double v = 0.0;
  CHECK(bh_norm_evaluate(norm, 3.0, 4.0, &v) == BH_STATUS_OK);
  CHECK(fabs(v - 5.0) < 1e-12);

  BhGrid grid = bh_grid_default();
  grid.theta_count = 256;
  grid.psi_scan = 128;
  BhEstimate est;
  CHECK(bh_estimate(norm, "H", 0.25, &grid, &est) == BH_STATUS_OK);
  CHECK(fabs(est.value - sqrt(2.0)) < 1e-3);
  bh_norm_free(norm);

  CHECK(bh_norm_from_spec("kind=pnorm p=oops", &norm) == BH_STATUS_PARSE_ERROR);
  CHECK(strlen(bh_last_error_message()) > 0);

  printf("ok %.6f\n", est.value);
  return 0;
}
