/** Minimal --input/--output argv parsing for the plugin contract. */

export interface PluginArgs {
  input: string;
  output: string;
}

export function parseArgs(argv: string[]): PluginArgs {
  let input: string | undefined;
  let output: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    if (argv[i] === "--input") input = argv[++i];
    else if (argv[i] === "--output") output = argv[++i];
    else throw new Error(`unknown argument ${argv[i]}`);
  }
  if (!input || !output) throw new Error("usage: --input <dir> --output <dir>");
  return { input, output };
}
