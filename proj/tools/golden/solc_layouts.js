// Regenerates tests/golden/layout/*.solc.json from the Solidity twins of the
// layout fixtures. Requires the `solc` npm package (solc-js):
//   npm install solc@0.8.26 && node tools/golden/solc_layouts.js
const fs = require('fs');
const path = require('path');
const solc = require('solc');

const root = path.resolve(__dirname, '..', '..');
const fixtures = path.join(root, 'tests', 'fixtures', 'layout');
const out = path.join(root, 'tests', 'golden', 'layout');

for (const file of fs.readdirSync(fixtures).filter((f) => f.endsWith('.sol')).sort()) {
  const source = '// SPDX-License-Identifier: UNLICENSED\npragma solidity ^0.8.0;\n' +
      fs.readFileSync(path.join(fixtures, file), 'utf8');
  const input = {
    language: 'Solidity',
    sources: {[file]: {content: source}},
    settings: {outputSelection: {'*': {'*': ['storageLayout']}}},
  };
  const result = JSON.parse(solc.compile(JSON.stringify(input)));
  const errors = (result.errors || []).filter((e) => e.severity === 'error');
  if (errors.length) {
    console.error(errors.map((e) => e.formattedMessage).join('\n'));
    process.exit(1);
  }
  const [name, contract] = Object.entries(result.contracts[file])[0];
  const golden = {compiler: solc.version(), contract: name, ...contract.storageLayout};
  const target = path.join(out, file.replace(/\.sol$/, '.solc.json'));
  fs.writeFileSync(target, JSON.stringify(golden, null, 2) + '\n');
  console.log('wrote', path.relative(root, target));
}
