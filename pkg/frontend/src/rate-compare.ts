import { rateCompare } from "./figures.js";
import { fail, writeSvg } from "./io.js";

const args = process.argv.slice(2);
if (args.length !== 3) {
  fail("usage: rate-compare <meanfield.csv> <sim.csv> <out.svg>");
}

try {
  writeSvg(args[2]!, rateCompare(args[0]!, args[1]!));
} catch (err) {
  fail(err instanceof Error ? err.message : String(err));
}
