import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";

export function writeSvg(path: string, svg: string): void {
  mkdirSync(dirname(path), { recursive: true });
  writeFileSync(path, svg, "utf8");
  console.log(`wrote ${path}`);
}

export function fail(message: string): never {
  console.error(message);
  process.exit(1);
}
