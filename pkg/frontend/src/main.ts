// Browser entry point: everything testable lives in app.ts.

import { ApiClient } from "./api.js";
import { createEditor } from "./app.js";

const root = document.getElementById("app");
if (root === null) throw new Error("missing #app element");
const editor = createEditor(root, new ApiClient());
void editor.refresh();
editor.start();
