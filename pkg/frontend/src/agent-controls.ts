import { agentControls } from "./figures.js";
import { fail, writeSvg } from "./io.js";

const args = process.argv.slice(2);
let title: string | undefined;
const positional: string[] = [];
for (let i = 0; i < args.length; i++) {
  if (args[i] === "--title") {
    title = args[++i];
  } else {
    positional.push(args[i]!);
  }
}
if (positional.length !== 2) {
  fail("usage: agent-controls <agents.csv> <out.svg> [--title TEXT]");
}

try {
  writeSvg(positional[1]!, agentControls(positional[0]!, title));
} catch (err) {
  fail(err instanceof Error ? err.message : String(err));
}
